import csv
import json
import os
from typing import Iterable, List, Sequence, Union


def _ensure_parent(pth: str):
	parent = os.path.dirname(pth)
	if parent:
		os.makedirs(parent, exist_ok=True)


def save_json(data: Union[dict, list], pth: str):
	"""Save a manifest, report or table to a JSON file.

	:param data: The data to save.
	:param pth: The path to save the data to."""

	_ensure_parent(pth)
	with open(pth, 'w') as outfile:
		json.dump(data, outfile, indent=1)


def load_json(pth: str) -> Union[dict, list]:
	with open(pth, 'r') as infile:
		return json.load(infile)


def fmt(value) -> str:
	"""Floats with 17 significant digits (round-trips IEEE doubles), everything else as str."""
	if isinstance(value, float):
		return f"{value:.17g}"
	return str(value)


def write_csv(header: Sequence[str], rows: Iterable[Sequence], pth: str = None, stream=None):
	"""Write rows under a header, to ``pth`` or to an open text stream.

	:param header: column names
	:param rows: one sequence of values per row, floats printed with :func:`fmt`"""
	def _write(f):
		writer = csv.writer(f, lineterminator='\n')
		writer.writerow(header)
		for row in rows:
			writer.writerow([fmt(v) for v in row])

	if stream is not None:
		return _write(stream)

	_ensure_parent(pth)
	with open(pth, 'w', newline='') as outfile:
		_write(outfile)


def read_csv(pth: str) -> List[dict]:
	"""Rows of a CSV file as dicts of strings."""
	with open(pth, 'r', newline='') as infile:
		return list(csv.DictReader(infile))
