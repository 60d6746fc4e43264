import re

CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter):
    rows = {}
    for key in ("passed", "failed", "error", "skipped"):
        for rep in terminalreporter.stats.get(key, []):
            m = CRITERION.search(getattr(rep, "nodeid", ""))
            if not m or (key == "passed" and rep.when != "call"):
                continue
            n = int(m.group(1))
            detail = dict(getattr(rep, "user_properties", ())).get("detail", "")
            status = "PASS" if key == "passed" else "FAIL"
            if rows.get(n, ("PASS",))[0] == "FAIL":
                continue
            rows[n] = (status, detail)
    if not rows:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(rows):
        status, detail = rows[n]
        terminalreporter.write_line(f"criterion {n}: {status}" + (f"  ({detail})" if detail else ""))
