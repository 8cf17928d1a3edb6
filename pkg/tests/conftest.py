from helpers import ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    by_id = {}
    for row in ACCEPTANCE:
        by_id.setdefault(row[0], []).append(row)
    for cid in sorted(by_id):
        rows = by_id[cid]
        ok = all(r[2] for r in rows)
        secs = sum(r[3] for r in rows)
        tr.write_line(f"criterion {cid}: {'PASS' if ok else 'FAIL'} ({secs:.1f}s)")
        if len(rows) > 1 or not ok or rows[0][4]:
            for _, part, passed, s, note in rows:
                extra = f" - {note}" if note else ""
                tr.write_line(f"    {part}: {'pass' if passed else 'FAIL'} ({s:.1f}s){extra}")
