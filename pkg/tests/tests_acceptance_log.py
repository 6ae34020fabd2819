"""Per-criterion result lines, filled by test_acceptance and printed at the end of the run."""

LINES: list[str] = []
