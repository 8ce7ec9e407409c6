from osmc.analysis.oracle import Oracle, bfs, oracle_distance
from osmc.analysis.probe import analyze_row, baseline_sizes, crossing_row, probe
from osmc.analysis.vc import ShatterResult, shattering_check
from osmc.analysis.checks import CheckResult, VerificationReport, VerifyOptions, verify

__all__ = [
    "Oracle", "bfs", "oracle_distance", "analyze_row", "baseline_sizes", "crossing_row", "probe",
    "ShatterResult", "shattering_check", "CheckResult", "VerificationReport", "VerifyOptions", "verify",
]
