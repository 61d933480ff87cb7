from contextlib import contextmanager
import os
import logging

import commentjson as json

from . import shared
from . import presets


__all__ = [
    "log_level",
    "threads",
    "rank_cache_limit",
    "output_dir",
    "counterexample_dir",
    "show_progress",
    "caches_disabled",
    "load_json_config",
]

# 统一的config文件（优先级最低，环境变量覆盖它）
if os.path.exists("config.json"):
    with open("config.json", "r", encoding="utf-8") as f:
        config = json.load(f)
else:
    config = {}


def load_json_config(path):
    """Read a commentjson file; scan configurations use the same syntax as config.json."""
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


## 处理log
log_level = os.environ.get("INTERTWINE_LOG_LEVEL", config.get("log_level", "INFO"))
logging.basicConfig(
    level=log_level,
    format="%(asctime)s [%(levelname)s] [%(filename)s:%(lineno)d] %(message)s",
)

## 线程数，0 表示使用全部核心
threads = os.environ.get("INTERTWINE_THREADS", config.get("threads", 0))
threads = shared.state.set_threads(threads)

rank_cache_limit = int(
    os.environ.get(
        "INTERTWINE_RANK_CACHE_LIMIT",
        config.get("rank_cache_limit", presets.RANK_CACHE_LIMIT),
    )
)

output_dir = config.get("output_dir", presets.OUTPUT_DIR)
counterexample_dir = config.get("counterexample_dir", presets.COUNTEREXAMPLE_DIR)
show_progress = config.get("show_progress", True)


@contextmanager
def caches_disabled():
    """Turn rank memoization off for oracles created or queried inside the block."""
    old = shared.state.rank_cache_enabled
    shared.state.rank_cache_enabled = False
    try:
        yield
    finally:
        shared.state.rank_cache_enabled = old
