import copy
import json
import os

SETTINGS_FILE = "hsd_settings.json"

DEFAULT_SETTINGS = {
    'counting': {
        'cross_check_limit': 10 ** 6,
        'chunk_count': 1,
        'show_progress': True,
        'distinct_slack': 1.5,
    },
    'codes': {
        'field_guard': 2 ** 24,
    },
    'output': {
        'float_digits': 12,
    },
    'tests': {
        'seed': 20240607,
    },
}


class SettingsManager:
    """Loads and saves the JSON settings file on top of the defaults"""

    def __init__(self, path=None, log_func=None):
        self.path = path or SETTINGS_FILE
        self.log_func = log_func
        self.settings = copy.deepcopy(DEFAULT_SETTINGS)

    def _log(self, message):
        if self.log_func:
            self.log_func(message)

    def load_settings(self):
        """Merge the settings file into the defaults; returns (ok, message)"""
        if not os.path.exists(self.path):
            return True, "Using default settings"
        try:
            with open(self.path, 'r') as f:
                loaded = json.load(f)
            if not isinstance(loaded, dict):
                raise ValueError("top level must be an object")

            for section, values in loaded.items():
                if section not in self.settings or not isinstance(values, dict):
                    self._log(f"Warning: Ignoring unknown settings section '{section}'")
                    continue
                for key, value in values.items():
                    if key not in self.settings[section]:
                        self._log(f"Warning: Ignoring unknown setting '{section}.{key}'")
                        continue
                    self.settings[section][key] = value
            return True, f"Loaded settings from {self.path}"

        except Exception as e:
            self.settings = copy.deepcopy(DEFAULT_SETTINGS)
            self._log(f"Warning: Could not load settings: {e}")
            return False, str(e)

    def save_settings(self):
        """Write the effective settings back to the file"""
        try:
            with open(self.path, 'w') as f:
                json.dump(self.settings, f, indent=2)
            return True, f"Settings saved to {self.path}"
        except Exception as e:
            self._log(f"Error: Could not save settings: {e}")
            return False, str(e)

    def get(self, section, key):
        return self.settings[section][key]
