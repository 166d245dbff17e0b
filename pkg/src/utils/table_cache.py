"""
On-disk cache of analytic pmf tables, stored as CSV files keyed by the md5
of the parameters that produced them.
"""

import datetime
import hashlib
import json
import shutil
import time
from pathlib import Path
from typing import Callable, Dict, Optional

import polars as pl


class PmfTableCache:
    """CSV cache of pmf tables with a time-to-live"""

    CACHE_DIR = Path(".cache/pmf_tables")
    CACHE_TTL = 7 * 86400  # one week

    def __init__(self, cache_dir: Optional[Path] = None):
        self.cache_dir = Path(cache_dir) if cache_dir else self.CACHE_DIR

    def _get_cache_key(self, key: Dict) -> str:
        """md5 of the canonical JSON form of the parameters"""
        return hashlib.md5(json.dumps(key, sort_keys=True).encode()).hexdigest()

    def _get_cache_path(self, key: Dict) -> Path:
        return self.cache_dir / f"{self._get_cache_key(key)}.csv"

    def _is_cache_valid(self, cache_path: Path) -> bool:
        if not cache_path.exists():
            return False
        return time.time() - cache_path.stat().st_mtime < self.CACHE_TTL

    def load(self, key: Dict) -> Optional[pl.DataFrame]:
        cache_path = self._get_cache_path(key)
        if not self._is_cache_valid(cache_path):
            return None
        try:
            return pl.read_csv(cache_path)
        except Exception as e:
            print(f"Ignoring unreadable cache entry {cache_path.name}: {e}")
            return None

    def save(self, key: Dict, frame: pl.DataFrame) -> None:
        try:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            frame.write_csv(self._get_cache_path(key))
        except OSError as e:
            print(f"Could not write cache entry: {e}")

    def get_or_compute(self, key: Dict, compute: Callable[[], pl.DataFrame],
                       use_cache: bool = True) -> pl.DataFrame:
        """Return the cached frame for key, computing and storing it on a miss"""
        if use_cache:
            cached = self.load(key)
            if cached is not None:
                print("✓ Loaded pmf table from cache")
                return cached
        frame = compute()
        if use_cache:
            self.save(key, frame)
        return frame

    def clear(self) -> None:
        if self.cache_dir.exists():
            shutil.rmtree(self.cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)

    def info(self) -> Dict:
        cache_files = list(self.cache_dir.glob("*.csv")) if self.cache_dir.exists() else []
        if not cache_files:
            return {"files": 0, "size_mb": 0, "oldest": None, "newest": None}

        total_size = sum(f.stat().st_size for f in cache_files)
        oldest = min(f.stat().st_mtime for f in cache_files)
        newest = max(f.stat().st_mtime for f in cache_files)
        return {
            "files": len(cache_files),
            "size_mb": round(total_size / (1024 * 1024), 2),
            "oldest": datetime.datetime.fromtimestamp(oldest).isoformat(),
            "newest": datetime.datetime.fromtimestamp(newest).isoformat(),
        }
