# -*- coding:utf-8 -*-
from .i18n import I18nAuto

i18n = I18nAuto()  # internationalization

# 地基：所有子集都放进一个机器字
MAX_GROUND_SIZE = 32
RANK_CACHE_LIMIT = 2 ** 26
EXHAUSTIVE_AXIOM_LIMIT = 9  # 超过这个规模只做随机抽样
AXIOM_SAMPLES = 400
TABLE_MAX_SIZE = 16
SUPPORTED_PRIMES = (2, 3, 5)

DEADLINE_CHECK_INTERVAL = 1024  # branch-and-bound nodes between clock reads

OUTPUT_DIR = "results"
COUNTEREXAMPLE_DIR = "counterexamples"
INSTANCE_SUFFIX = ".inst"
MATROID_SUFFIX = ".matroid"

# exit codes of Intertwiner.py
EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RESOURCE_CAP = 3
EXIT_THEOREM_VIOLATION = 4

# 错误信息
STANDARD_ERROR_MSG = i18n("error: ")
PARSE_ERROR_MSG = i18n("could not parse or validate the input")
SIZE_CAP_MSG = i18n("the ground set exceeds the 32-element cap")
THEOREM_VIOLATION_MSG = i18n("THEOREM VIOLATION: the instance was saved to")
COUNTEREXAMPLE_MSG = i18n("potential counterexample saved to")
KAPPA_MISMATCH_MSG = i18n("computed connectivities differ from the expected grid values")

NONE_CONSISTENT_MSG = i18n("consistent")
NONE_ALARM_MSG = i18n("THEOREM VIOLATION")
NO_QUALIFYING_MSG = i18n("no qualifying element among {count} candidates")
FOUND_QUALIFYING_MSG = i18n("qualifying element {element} ({operation}) among {count} candidates")
SCAN_DONE_MSG = i18n("scan finished: {records} records, {flagged} flagged, {exhausted} budget-exhausted")
SCAN_INTERRUPTED_MSG = i18n("scan interrupted after {done} of {total} instances; keeping the finished records")

# report headers
CLASSIFY_COLUMNS = [
    "element",
    "deletable",
    "contractible",
    "flexible",
    "kappa_after_delete",
    "kappa_after_contract",
]

SCAN_COLUMNS = [
    "family",
    "seed",
    "index",
    "size",
    "q_size",
    "r_size",
    "s_size",
    "t_size",
    "k",
    "l",
    "free_size",
    "found",
    "element",
    "operation",
    "budget_exhausted",
    "flagged",
    "wall_time",
]

# 扫描的分区
REGION_BELOW_CONJECTURE = "below_conjecture"
REGION_CONJECTURE_TO_C = "conjecture_to_c"
REGION_GUARANTEED = "guaranteed"
REGION_UNKNOWN = "unknown"  # budget ran out before kappa was known

SCAN_FAMILIES = ["graphic", "linear-GF(2)", "uniform-mix"]
UNIFORM_MIX_MEMBERS = ["uniform", "graphic", "linear-GF(2)", "linear-GF(3)"]

SUMMARY_COLUMNS = ["k", "l", "region", "records", "found", "budget_exhausted", "flagged"]
SCAN_RECORDS_FILE = "scan_records.csv"
SCAN_SUMMARY_FILE = "scan_summary.json"
