"""Runs the tool over the fixture corpus and validates every machine-mode
report against docs/report.schema.json. Also checks that the process exit code
equals the reported one and that text mode shows every witness."""

import json
import pathlib
import subprocess
import sys

import jsonschema


def invocations(path, doc):
    f = str(path)
    cycles = doc.get("cycles", {})
    functions = doc.get("functions", {})

    def rank_of_cycle(name):
        c = cycles[name]
        if "complex" in c:
            return doc["complexes"][c["complex"]]["ambient_rank"]
        return c["ambient_rank"]

    for name in cycles:
        yield ["balance", f, "--cycle", name]
        yield ["effective", f, "--cycle", name]
        for region, r in doc.get("regions", {}).items():
            if r["ambient_rank"] == rank_of_cycle(name):
                yield ["effective", f, "--cycle", name, "--region", region]
    for a in cycles:
        for b in cycles:
            ra, rb = rank_of_cycle(a), rank_of_cycle(b)
            if ra == rb and cycles[a]["dim"] + cycles[b]["dim"] >= ra:
                yield ["intersect", f, "--a", a, "--b", b]
                if cycles[a]["dim"] + cycles[b]["dim"] == ra:
                    yield ["intersect", f, "--a", a, "--b", b, "--degree"]
    for name, fn in functions.items():
        yield ["corner-locus", f, "--function", name]
        if "ambient_rank" in fn:
            yield ["toric-check", f, "--function", name]
    for m in doc.get("maps", {}):
        for c in cycles:
            yield ["push", f, "--map", m, "--cycle", c]
    for name, chart in doc.get("charts", {}).items():
        yield ["psh-check", f, "--chart", name, "--lenient"]
        yield ["graph-ma", f, "--chart", name]
        if "extension" in chart:
            yield ["psh-strong", f, "--chart", name]
    if doc.get("charts"):
        yield ["psh-check", f]
    for name in doc.get("forms", {}):
        for mode in ("weak", "positive", "strong"):
            yield ["positivity", f, "--form", name, "--mode", mode]


def main():
    tool, root = sys.argv[1], pathlib.Path(sys.argv[2])
    schema = json.loads((root / "docs" / "report.schema.json").read_text())
    validator = jsonschema.Draft202012Validator(schema)
    runs = []
    for path in sorted((root / "fixtures").glob("*.json")):
        runs += list(invocations(path, json.loads(path.read_text())))
    for path in sorted((root / "tests" / "data" / "invalid").glob("*.json")):
        runs.append(["balance", str(path), "--cycle", "L"])
    runs.append(["balance", str(root / "missing.json"), "--cycle", "L"])
    runs.append(["psh-strong", str(root / "fixtures" / "example5_3.json")])
    runs.append(["graph-ma", str(root / "fixtures" / "toric.json")])

    failures = 0
    codes = {}
    for args in runs:
        machine = subprocess.run([tool, *args, "--format", "json"], capture_output=True, text=True)
        human = subprocess.run([tool, *args, "--format", "text"], capture_output=True, text=True)
        label = " ".join(a if "/" not in a else pathlib.Path(a).name for a in args)
        try:
            report = json.loads(machine.stdout)
        except json.JSONDecodeError:
            print(f"FAIL {label}: no JSON report (exit {machine.returncode})")
            failures += 1
            continue
        errors = sorted(validator.iter_errors(report), key=lambda e: list(e.path))
        problems = [f"schema: {e.message} at {list(e.path)}" for e in errors]
        if report["exit_code"] != machine.returncode:
            problems.append(f"exit {machine.returncode} but report says {report['exit_code']}")
        if human.returncode != machine.returncode:
            problems.append(f"text mode exit {human.returncode} differs")
        for w in report["witnesses"]:
            needle = "witness " + w["condition"]
            if "point" in w:
                needle_point = "(" + ", ".join(w["point"]) + ")"
                if needle_point not in human.stdout:
                    problems.append(f"text mode lacks witness point {needle_point}")
            if human.stdout.count(needle) < sum(1 for x in report["witnesses"] if x["condition"] == w["condition"]):
                problems.append(f"text mode lacks a '{w['condition']}' witness")
        codes[report["exit_code"]] = codes.get(report["exit_code"], 0) + 1
        if problems:
            failures += 1
            print(f"FAIL {label}: " + "; ".join(sorted(set(problems))))
    print(f"{len(runs)} invocations, exit codes {dict(sorted(codes.items()))}, {failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
