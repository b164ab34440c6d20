import os
import pathlib

# Coefficient tables are expensive; keep them next to the repo so repeated
# test runs (and the acceptance census) share one cache.
_CACHE = pathlib.Path(__file__).resolve().parent.parent / ".cache"
os.environ.setdefault("TWISTCENSUS_CACHE", str(_CACHE))
