import re


def pytest_runtest_logreport(report):
    # acceptance tests print their own PASS lines; mirror failures so every
    # criterion always gets exactly one pass/fail line
    if report.when != "call" or not report.failed:
        return
    match = re.search(r"test_acceptance.*criterion_(\d+)", report.nodeid)
    if match:
        print(f"\nFAIL criterion {int(match.group(1))}: {report.nodeid}")
