import datetime
import re
import socket

TIME_TOKEN = re.compile(r'\[time\((.*?)\)\]')
# characters a token value may not carry into a file path
UNSAFE_PATH_CHARS = re.compile(r'[\\/:*?"<>|]')


def path_safe(value):
    return UNSAFE_PATH_CHARS.sub('_', value).strip() or '_'


def replace_tokens(string, grammar_name=None, custom_tokens=None):
    """Expand [hostname], [grammar] and [time(<strftime format>)] in a path or file name."""
    tokens = {'[hostname]': path_safe(socket.gethostname())}
    if grammar_name is not None:
        tokens['[grammar]'] = path_safe(grammar_name)
    if custom_tokens:
        tokens.update({token: path_safe(value) for token, value in custom_tokens.items()})

    for token, value in tokens.items():
        string = string.replace(token, value)

    now = datetime.datetime.now()

    def expand_time(match):
        try:
            return now.strftime(match.group(1))
        except ValueError as e:
            raise ValueError(f"Invalid time format: {match.group(1)} - {e}") from e

    return TIME_TOKEN.sub(expand_time, string)
