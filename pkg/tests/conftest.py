from collections import OrderedDict

# criterion number -> [ok, [details]]; filled by test_acceptance.py
ACCEPTANCE = OrderedDict()


def record(num, ok, detail):
    entry = ACCEPTANCE.setdefault(num, [True, []])
    entry[0] = entry[0] and bool(ok)
    entry[1].append(detail)


def acceptance_lines():
    return [f"criterion {num}: {'PASS' if ok else 'FAIL'}  {'; '.join(details)}"
            for num, (ok, details) in sorted(ACCEPTANCE.items())]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance_lines():
        terminalreporter.write_line(line)
