import os
import re

from colorama import Fore, Style

from ..utils.replace_tokens import replace_tokens


def default_output_directory():
    from folder_paths import get_output_directory

    return get_output_directory()


class SaveTextFile:
    @classmethod
    def INPUT_TYPES(cls):
        return {
            "required": {
                "file_text": ("STRING", {"forceInput": True, "tooltip": "The schema or model document to save."}),
                "path": ("STRING", {"default": '[grammar]/[time(%Y-%m-%d)]/', "multiline": False, "tooltip": "The folder to save the file to, inside the output directory.\n\n[grammar] is the grammar name, [time(%Y-%m-%d)] a date folder."}),
                "prefix": ("STRING", {"default": "[grammar]", "tooltip": "The start of the file name.\n\nAccepts the same tokens as the path."}),
                "counter_separator": ("STRING", {"default": "_", "tooltip": "The separator between the file name and the counter."}),
                "counter_length": ("INT", {"default": 3, "min": 0, "max": 24, "step": 1, "tooltip": "The number of digits in the counter."}),
                "output_extension": ("STRING", {"default": "json", "tooltip": "json for documents, puml for class diagrams."}),
            },
            "optional": {
                "grammar_name": ("STRING", {"default": "grammar", "tooltip": "Replaces the [grammar] token."}),
            },
        }

    OUTPUT_NODE = True
    RETURN_TYPES = ("STRING", "STRING")
    RETURN_NAMES = ("output_full_path", "output_name")
    OUTPUT_TOOLTIPS = ("The full path to the saved file", "The name of the saved file without extension")
    FUNCTION = "save_text_file"
    CATEGORY = "⚡ MNeMiC Nodes"
    DESCRIPTION = "Saves an exported schema or model document under the output directory with a unique numbered name."

    def save_text_file(self, file_text, path, prefix='[grammar]', counter_separator='_', counter_length=3,
                       output_extension='json', grammar_name='grammar', output_root=None):
        path = replace_tokens(path, grammar_name)
        prefix = replace_tokens(prefix, grammar_name)

        if not output_extension.strip():
            raise ValueError("The output extension cannot be empty.")
        if not file_text.strip():
            raise ValueError("There is no text specified to save! Text is empty.")
        if '..' in re.split(r'[\\/]', path) or os.path.isabs(path):
            raise ValueError("The specified path navigates outside the output directory.")

        output_base_dir = os.path.abspath(output_root or default_output_directory())
        full_path = os.path.abspath(os.path.join(output_base_dir, path))
        if os.path.commonpath([output_base_dir, full_path]) != output_base_dir:
            raise ValueError("The specified path is outside the allowed output directory.")

        if not os.path.exists(full_path):
            print(f"{Fore.YELLOW}The path `{full_path}` doesn't exist, creating it.{Style.RESET_ALL}")
            os.makedirs(full_path, exist_ok=True)

        extension = f".{output_extension.strip().lstrip('.')}"
        filename = self.generate_filename(full_path, prefix, counter_separator, int(counter_length), extension)
        file_path = os.path.join(full_path, filename)
        self.write_text_file(file_path, file_text)
        return file_path, os.path.splitext(filename)[0]

    def generate_filename(self, path, prefix, separator, number_padding, extension):
        """Next free ``{prefix}{separator}{counter}{extension}`` name in ``path``."""
        if number_padding <= 0:
            return f"{prefix}{extension}"
        pattern = re.compile(f"{re.escape(prefix)}{re.escape(separator)}(\\d{{{number_padding},}}){re.escape(extension)}$")
        counters = [int(m.group(1)) for m in map(pattern.match, os.listdir(path)) if m]
        counter = max(counters, default=0) + 1
        return f"{prefix}{separator}{counter:0{number_padding}}{extension}"

    def write_text_file(self, file, content):
        try:
            with open(file, 'w', encoding='utf-8', newline='\n') as f:
                f.write(content)
        except OSError as e:
            print(Fore.RED + f"Unable to save file `{file}`: {e}" + Style.RESET_ALL)
            raise
