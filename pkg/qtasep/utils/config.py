"""User-level defaults, stored in an INI file in the user's config directory.

Precedence for every setting: explicit argument, then environment variable, then
the config file, then the built-in default."""
import appdirs
import os
import configparser

appname = "qtasep"
appauthor = "qtasep"
config_dir = appdirs.user_config_dir(appname, appauthor)
config_file = os.path.join(config_dir, "config.ini")

SECTION = 'QTASEP'
KEYS = ('THREADS', 'CACHE_DIR', 'EVENT_BUDGET')
"""Keys recognised in the config file"""

DEFAULT_EVENT_BUDGET = 10 ** 9


def _load():
	config = configparser.ConfigParser()
	if os.path.exists(config_file):
		config.read(config_file)
	return config


def write_to_config(key, value, section=SECTION):
	"""Load config, and write key value pair to cfg[section]"""
	config = _load()

	if section not in config:
		config[section] = {}

	config[section][key] = str(value)

	os.makedirs(config_dir, exist_ok=True)
	with open(config_file, 'w') as configfile:
		config.write(configfile)


def read_from_config(key, section=SECTION):
	"""Load config, and read value from cfg[section]. None if not present"""
	config = _load()

	if section not in config:
		return None

	if key not in config[section]:
		return None

	return config[section][key]


def remove_from_config(key, section=SECTION):
	"""Load config, and remove key from cfg[section]"""
	config = _load()

	if section not in config or key not in config[section]:
		return None

	del config[section][key]

	with open(config_file, 'w') as configfile:
		config.write(configfile)


def remove_config():
	"""Remove config file"""
	if os.path.exists(config_file):
		os.remove(config_file)


def show_config() -> dict:
	"""Return all stored settings as a dict"""
	config = _load()
	if SECTION not in config:
		return {}
	return {k.upper(): v for k, v in config[SECTION].items()}


def get_threads(threads: int = None) -> int:
	"""Number of worker threads to use.

	:param threads: explicit value, wins if given"""
	if threads is not None:
		return max(1, int(threads))

	value = os.environ.get('QTASEP_THREADS') or read_from_config('THREADS')
	if value is not None:
		return max(1, int(value))

	return os.cpu_count() or 1


def get_cache_dir(cache_dir: str = None) -> str:
	"""Directory for cached limit-CDF tables (created if missing).

	:param cache_dir: explicit value, wins if given"""
	if cache_dir is None:
		cache_dir = os.environ.get('QTASEP_CACHE_DIR') or read_from_config('CACHE_DIR')

	if cache_dir is None:
		cache_dir = os.path.join(appdirs.user_cache_dir(appname, appauthor), 'tables')

	os.makedirs(cache_dir, exist_ok=True)
	return cache_dir


def get_event_budget(budget: int = None) -> int:
	"""Per-trajectory event budget of the simulator."""
	if budget is not None:
		return int(budget)

	value = read_from_config('EVENT_BUDGET')
	return int(value) if value is not None else DEFAULT_EVENT_BUDGET
