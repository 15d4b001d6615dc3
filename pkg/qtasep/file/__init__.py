from .outputs import save_json, load_json, write_csv, read_csv
from .cache import cache_file, cleanup_cache
