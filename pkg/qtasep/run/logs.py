import logging
import os
import sys
from datetime import datetime

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def setup_logging(out_dir: str = None, verbose: bool = False) -> str:
	"""Configure the root logger for a CLI session.

	Writes everything at INFO and above to ``<out_dir>/logs/<yymmdd-HHMMSS>/log.txt``,
	and WARNING and above (INFO with ``verbose``) to stderr.

	:return: path of the log file, or None without ``out_dir``"""
	root = logging.getLogger()
	root.setLevel(logging.INFO)
	for handler in list(root.handlers):
		root.removeHandler(handler)
		handler.close()

	console = logging.StreamHandler(sys.stderr)
	console.setLevel(logging.INFO if verbose else logging.WARNING)
	console.setFormatter(logging.Formatter(LOG_FORMAT))
	root.addHandler(console)

	if out_dir is None:
		return None

	log_dir = os.path.join(out_dir, 'logs', datetime.now().strftime('%y%m%d-%H%M%S'))
	os.makedirs(log_dir, exist_ok=True)
	log_loc = os.path.join(log_dir, 'log.txt')

	file_handler = logging.FileHandler(log_loc, mode='a')
	file_handler.setLevel(logging.INFO)
	file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
	root.addHandler(file_handler)
	return log_loc
