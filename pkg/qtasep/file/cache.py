import os

from ..utils.config import get_cache_dir


def cache_file(name: str, cache_dir: str = None, ext: str = '.json') -> str:
	"""Path of a cached table inside the user's cache dir.

	:param name: file stem
	:param cache_dir: overrides the configured cache dir
	:param ext: file extension to use"""

	if not ext.startswith('.'):
		ext = '.' + ext

	return os.path.join(get_cache_dir(cache_dir), name + ext)


def cleanup_cache(cache_dir: str = None) -> int:
	"""Delete all cached tables. Returns how many files were removed."""
	directory = get_cache_dir(cache_dir)
	removed = 0
	for f in os.listdir(directory):
		if f.endswith('.json'):
			os.remove(os.path.join(directory, f))
			removed += 1
	return removed
