#!/usr/bin/env python3
"""Writes the scripted model responses used by the replay fixtures.

Each snippet gets one response per prompt mode. The plan below says which
expected lines receive a correct suggestion ("ok"), a suggestion that only
renames a local variable ("minor"), a wrong suggestion ("wrong") or nothing,
and which unrelated lines are flagged anyway. The script checks the totals the
fixtures are built around before writing anything.

usage: make_desk_responses.py <corpus_dir> <taxonomy.md> <out_dir>
"""
import pathlib
import re
import sys

WITH, NO = "with-tax", "no-tax"


def unescape(cell):
    out, i = [], 0
    while i < len(cell):
        if cell[i] == "\\" and i + 1 < len(cell) and cell[i + 1] in "|n\\":
            out.append({"|": "|", "n": "\n", "\\": "\\"}[cell[i + 1]])
            i += 2
        else:
            out.append(cell[i])
            i += 1
    return "".join(out)


def split_row(line):
    cells, cur, i = [], "", 0
    line = line.strip().strip("|") if line.strip().endswith("|") and not line.strip().endswith("\\|") else line.strip().lstrip("|")
    while i < len(line):
        if line[i] == "\\" and i + 1 < len(line):
            cur += line[i:i + 2]
            i += 2
            continue
        if line[i] == "|":
            cells.append(cur.strip())
            cur = ""
        else:
            cur += line[i]
        i += 1
    cells.append(cur.strip())
    return cells


def strip_fence(text):
    m = re.fullmatch(r"(`+)(.*)\1", text, re.S)
    if not m:
        return text
    body = m.group(2)
    if len(body) >= 2 and body[0] == " " and body[-1] == " " and body.strip():
        body = body[1:-1]
    return body


def load_truth(path):
    changes = {}
    for line in path.read_text().splitlines()[1:]:
        if not line.startswith("change:"):
            continue
        cells = split_row(line[len("change:"):])
        changes[int(cells[0])] = (cells[1], strip_fence(unescape(cells[2])) if len(cells) > 2 else "")
    return changes


def load_taxonomy(path):
    scenarios = {}
    for line in path.read_text().splitlines():
        if line.startswith("| QSK-"):
            cells = split_row(line)
            scenarios[cells[0]] = {"category": cells[1], "summary": unescape(cells[3]),
                                   "artifacts": [a.strip() for a in unescape(cells[4]).split(",")]}
    return scenarios


# Per snippet and mode: expected-line verdicts, wrong suggestions and stray
# findings. Expected lines that are not listed are missed.
#   stray: (line spec, scenario id or "*", description, artifact, refactoring, optional)
# Scenario ids are only rendered in with-tax responses.
SAMPLER = ("QSK-046-033", "Backend counts can come from the Sampler primitive", "get_counts",
           "dist = Sampler().run(qc).result().quasi_dists[0]", True)

PLAN = {
    "s01-execute-basicaer": {
        WITH: {"ok": [2, 9, 10], "stray": [("11",) + SAMPLER]},
        NO: {"ok": [9, 10], "wrong": {2: "from qiskit import QuantumCircuit, Aer, transpile"},
             "stray": [("11",) + SAMPLER]},
    },
    "s02-execute-aer-ghz": {
        WITH: {"ok": [3, 14], "stray": [("15",) + SAMPLER]},
        NO: {"ok": [3, 13, 14], "stray": [("15",) + SAMPLER,
             ("10-11", None, "Loop-built entanglement can use a library circuit", "cx",
              "qc.compose(GHZ(n), inplace=True)", True)]},
    },
    "s03-opflow-expectation": {
        WITH: {"ok": [3, 4, 7, 13, 14, 16], "wrong": {15: "sampler = Sampler()"},
               "stray": [("5", "*", "Unused simulator import after the primitive migration", "AerSimulator", "", False)]},
        NO: {"ok": [3, 7, 13], "wrong": {4: "from qiskit.algorithms import Estimator",
                                          14: "expectation = measurable.eval()",
                                          16: "value = sampler.run(expectation).result().values[0]"},
             "stray": [("5", None, "Simulator import is no longer needed", "AerSimulator", "", False),
                       ("10", None, "Parameterise the rotation angle", "ry", "ansatz.ry(Parameter('θ'), 0)", True)]},
    },
    "s04-parameter-binding-qasm": {
        WITH: {"wrong": {10: "bound = qc.assign_parameters(theta=value)", 11: "print(bound.qasm(formatted=True))"},
               "stray": [("7", "*", "measure_all adds a new classical register", "measure_all",
                          "qc.measure_all(add_bits=False)", False)]},
        NO: {"wrong": {10: "bound = qc.bind_parameters({theta: value}, inplace=True)", 11: "print(str(bound))"},
             "stray": [("7", None, "measure_all adds a new classical register", "measure_all",
                        "qc.measure_all(add_bits=False)", False)]},
    },
    "s05-phase-gates": {
        WITH: {"wrong": {8: "qc.cu(math.pi / 2, 0, 0, 0, 0, 2)", 9: "qc.cu(math.pi, 0, 0, 0, 1, 2)",
                         10: "qc.rz(-math.pi / 4, 1)"},
               "stray": [("13", "*", "Text drawer output changed", "draw", "print(qc.draw(output='text'))", True)]},
        NO: {"wrong": {8: "qc.crz(math.pi / 2, 0, 2)", 9: "qc.crz(math.pi, 1, 2)", 10: "qc.rz(-math.pi / 4, 1)"},
             "stray": [("13", None, "Text drawer output changed", "draw", "print(qc.draw(output='text'))", True)]},
    },
    "s06-gate-aliases": {
        WITH: {"ok": [9, 10, 13, 14, 15, 16, 20, 21], "wrong": {17: "qc.mcx(ctrl, tgt[0])"}},
        NO: {"wrong": {13: "qc.mcx([ctrl[0], ctrl[1]], tgt[0])", 14: "qc.mcx([ctrl[1], ctrl[2]], tgt[1])",
                       15: "qc.swap(tgt[0], tgt[1])", 16: "qc.swap(tgt[1], tgt[0])", 17: "qc.mcx(ctrl, tgt[0])"},
             "stray": [("24", None, "count_ops returns an OrderedDict", "count_ops", "print(dict(qc.count_ops()))", True)]},
    },
    "s07-sampler-primitive": {
        WITH: {"stray": [("2", "*", "Use the Aer implementation of the Sampler", "Sampler",
                          "from qiskit_aer.primitives import Sampler", False),
                         ("10", "QSK-046-033", "Sampler options are passed at construction", "Sampler",
                          "result = Sampler(options={'shots': 2048}).run(qc).result()", True)]},
        NO: {"stray": [("2", None, "Use the Aer implementation of the Sampler", "Sampler",
                        "from qiskit_aer.primitives import Sampler", False),
                       ("10", None, "Sampler options are passed at construction", "Sampler",
                        "result = Sampler(options={'shots': 2048}).run(qc).result()", True)]},
    },
    "s08-snapshot": {
        WITH: {"wrong": {9: "qc.save_state()"},
               "stray": [("10", "QSK-046-001", "Run through the backend", "run",
                          "result = execute(qc, backend).result()", False)]},
        NO: {"wrong": {9: "qc.save_state()", 11: "state = result.get_statevector()"}},
    },
    "s09-execute-cnot": {
        WITH: {"ok": [1, 6, 7], "stray": [("12",) + SAMPLER]},
        NO: {"ok": [1, 6, 7, 11], "stray": [("12",) + SAMPLER,
             ("10", None, "Let Aer choose the simulation method", "AerSimulator",
              "sim = AerSimulator(method='automatic')", True)]},
    },
    "s10-grover-quantum-instance": {
        WITH: {"ok": [1, 3, 8, 9],
               "stray": [("6", "*", "PhaseOracle needs the tweedledum package", "PhaseOracle",
                          "oracle = PhaseOracle('(a & b) | ~c')", False)]},
        NO: {"ok": [1, 3], "wrong": {8: "qi = Sampler(AerSimulator(), shots=1024)", 9: "grover = Grover(qi)"},
             "stray": [("6", None, "PhaseOracle needs the tweedledum package", "PhaseOracle",
                        "oracle = PhaseOracle('(a & b) | ~c')", False),
                       ("11", None, "Report the oracle evaluation", "top_measurement",
                        "print(result.oracle_evaluation)", True)]},
    },
    "s11-ibmq-account": {
        WITH: {"stray": [("9", "QSK-046-001", "Submit through the backend", "run",
                          "job = backend.run(transpile(qc, backend), shots=100)", False)]},
        NO: {"stray": [("9", None, "Submit through a Sampler session", "run",
                        "job = Sampler(backend).run(qc, shots=100)", False)]},
    },
    "s12-fake-backend-unroller": {
        WITH: {"ok": [2, 4, 6, 10, 13],
               "stray": [("3", "QSK-046-031", "Preset pass managers replace hand-built ones", "PassManager",
                          "from qiskit.transpiler.preset_passmanagers import generate_preset_pass_manager", True),
                         ("11", "QSK-046-008", "Toffoli alias", "ccx", "qc.toffoli(0, 1, 2)", False),
                         ("14",) + SAMPLER]},
        NO: {"wrong": {2: "from qiskit.providers.fake_provider import FakeManilaV2",
                       4: "from qiskit.transpiler.passes import Unroll3qOrMore", 6: "backend = FakeManila(version=2)",
                       13: "unrolled = PassManager(Unroll3qOrMore()).run(qc)"},
             "stray": [("14",) + SAMPLER,
                       ("3", None, "Preset pass managers replace hand-built ones", "PassManager",
                        "from qiskit.transpiler.preset_passmanagers import generate_preset_pass_manager", True)]},
    },
    "s13-basic-provider": {
        WITH: {"stray": [("2", "QSK-046-039", "basicaer provider move", "basic_provider",
                          "from qiskit.providers.basic_provider import BasicSimulator", False),
                         ("9",) + SAMPLER]},
        NO: {"stray": [("2", None, "Provider module was renamed", "basic_provider",
                        "from qiskit.providers.basicaer import QasmSimulatorPy", False),
                       ("9",) + SAMPLER]},
    },
    "s14-qasm-roundtrip": {
        WITH: {"ok": [1, 12, 13, 14], "wrong": {15: "open('out.qasm', 'w').write(qc.qasm())"}},
        NO: {"ok": [1, 12, 13, 14, 15],
             "stray": [("3", None, "OpenQASM 3 is the current exchange format", "OPENQASM",
                        'SOURCE = """OPENQASM 3.0;', True)]},
    },
    "s15-parameter-sweep": {
        WITH: {"ok": [2, 9, 15], "minor": {14: "bound_qc = template.assign_parameters({phi: angle})"},
               "stray": [("16",) + SAMPLER]},
        NO: {"ok": [2, 9, 15], "minor": {14: "bound_qc = template.assign_parameters({phi: angle})"},
             "stray": [("16",) + SAMPLER]},
    },
    "s16-readout-mitigation": {
        WITH: {"ok": [3, 8, 9, 10], "wrong": {17: "corrected = mit.apply_correction(raw, [0, 1])"},
               "stray": [("16",) + SAMPLER]},
        NO: {"stray": [("16",) + SAMPLER,
                       ("6", None, "Use a noisy simulator to make mitigation meaningful", "AerSimulator",
                        "backend = AerSimulator.from_backend(FakeManilaV2())", True)]},
    },
    "s17-job-monitor": {
        WITH: {"wrong": {2: "from qiskit.tools.monitor import job_monitor", 11: "print(job.status())"}},
        NO: {"ok": [2], "wrong": {11: "print(job.status())"}, "stray": [("12",) + SAMPLER]},
    },
    "s18-extensions-unitary": {
        WITH: {"ok": [3, 9, 10], "wrong": {11: "qc.unitary(np.diag(phases), [0, 1])"}},
        NO: {"wrong": {3: "from qiskit.quantum_info import UnitaryGate", 9: "qc.unitary(hadamard, 0)",
                       10: "qc.unitary(hadamard, 1)"}},
    },
    "s19-qasm2-exchange": {
        WITH: {"stray": [("9", "QSK-046-030", "Load OpenQASM text", "qasm2",
                          "again = QuantumCircuit.from_qasm_str(text)", False)]},
        NO: {"stray": [("9", None, "Load OpenQASM text", "qasm2", "again = QuantumCircuit.from_qasm_str(text)", False),
                       ("10", None, "Circuit equality ignores names", "assert",
                        "assert again.to_instruction() == qc.to_instruction()", True)]},
    },
    "s20-conditional-correction": {
        WITH: {"wrong": {11: "qc.x(q[1]).c_if(c[0], 1)", 12: "qc.cx(q[1], q[0])"},
               "stray": [("13", "QSK-046-041", "Visualization import", "circuit_drawer",
                          "qc.draw(output='text')", False)]},
        NO: {"wrong": {2: "from qiskit.visualization.circuit import circuit_drawer", 11: "qc.x(q[1]).c_if(c[0], 1)"}},
    },
    "s21-parallel-map": {WITH: {}, NO: {}},
    "s22-execute-single": {
        WITH: {"stray": [("11", "QSK-046-033", "Read results from the Sampler primitive", "result",
                          "print(Sampler().run(qc).result())", True)]},
        NO: {"wrong": {2: "from qiskit import QuantumCircuit, execute, transpile",
                       10: "job = execute(transpile(qc, backend), backend, shots=2000)"}},
    },
    "s23-synthesis-globals": {
        WITH: {"wrong": {2: "from qiskit.transpiler.synthesis import OneQubitEulerDecomposer",
                         3: "from qiskit.transpiler.synthesis import two_qubit_cnot_decompose",
                         4: "from qiskit.utils import algorithm_globals"},
               "range": ["2-3"]},
        NO: {"ok": [2, 3], "wrong": {4: "import numpy as np"},
             "stray": [("9", None, "Seed a local generator instead of global state", "random_unitary",
                        "u = random_unitary(2, seed=rng.integers(1000))", True)]},
    },
    "s24-statevector-backend": {
        WITH: {"ok": [1, 8, 10, 14], "wrong": {13: "unitary_backend = AerSimulator(method='unitary')"}},
        NO: {"ok": [8, 10, 14], "wrong": {1: "from qiskit import QuantumCircuit, transpile\nfrom qiskit_aer import Aer"},
             "stray": [("9", None, "Transpilation is unnecessary for exact simulation", "transpile", "", True)]},
    },
    "s25-sparse-pauli": {WITH: {}, NO: {}},
}

# Totals the fixture is built to reproduce: scenario level (tp, fp, fn, tn)
# and line level (tp, fp, fn).
TARGETS = {WITH: ((12, 9, 3, 1), (50, 40, 31)), NO: ((10, 11, 3, 1), (29, 61, 52))}

BOLD_IDS = {("s06-gate-aliases", 9)}
PROSE = [
    ("I reviewed the snippet line by line against the target version.", "Let me know if you need more detail."),
    ("Below are the lines that need attention when moving to Qiskit 0.46.", ""),
    ("Here is my analysis.", "All other lines are compatible with the target version."),
    ("", "Suggestions marked (optional) are improvements rather than required changes."),
]


def parse_range(spec):
    a, _, b = spec.partition("-")
    return list(range(int(a), int(b or a) + 1))


def cell(text):
    return text.replace("\\", "\\\\").replace("|", "\\|").replace("\n", "<br>")


def code_cell(text):
    return "`" + cell(text) + "`" if text else ""


def findings_for(sid, mode, plan, source, truth, taxonomy):
    """Rows in line order plus the per-line verdicts used for checking."""
    rows, verdicts = [], []
    ranged = {ln for spec in plan.get("range", []) for ln in parse_range(spec)}
    grouped = {}

    def describe(sid_, line):
        scen = truth[line][0]
        info = taxonomy[scen]
        return scen, info["category"] + ": " + info["summary"].split(";")[0], info["artifacts"][0]

    for line in sorted(truth):
        if line in plan.get("ok", []):
            refactor, verdict = truth[line][1], "ok"
        elif line in plan.get("minor", {}):
            refactor, verdict = plan["minor"][line], "ok"
        elif line in plan.get("wrong", {}):
            refactor, verdict = plan["wrong"][line], "wrong"
        else:
            continue
        scen, desc, artifact = describe(sid, line)
        verdicts.append((line, verdict, True))
        row = {"line": str(line), "code": source[line - 1], "id": scen, "desc": desc,
               "artifact": artifact, "refactor": refactor}
        if line in ranged:
            grouped.setdefault(tuple(ranged), []).append(row)
        else:
            rows.append((line, row))
    for key, members in grouped.items():
        first = members[0]
        rows.append((min(key), {**first, "line": f"{min(key)}-{max(key)}",
                                "code": "\n".join(source[l - 1] for l in key),
                                "refactor": "\n".join(m["refactor"] for m in members)}))
    for spec, scen, desc, artifact, refactor, optional in plan.get("stray", []):
        lines = parse_range(spec)
        for ln in lines:
            verdicts.append((ln, "stray", ln in truth))
        rows.append((lines[0], {"line": spec, "code": "\n".join(source[l - 1] for l in lines),
                                "id": scen or "*", "desc": desc + (" (optional)" if optional else ""),
                                "artifact": artifact, "refactor": refactor}))
    rows.sort(key=lambda r: r[0])
    return [r for _, r in rows], verdicts


def render(sid, mode, rows, index):
    before, after = PROSE[index % len(PROSE)]
    out = []
    if before:
        out += [before, ""]
    if mode == WITH:
        out += ["| Line | Code | Scenario ID | Scenario | Artifact | Refactoring |", "|---|---|---|---|---|---|"]
    else:
        out += ["| Line | Code | Scenario | Artifact | Refactoring |", "|------|------|----------|----------|-------------|"]
    for row in rows:
        ident = row["id"]
        if (sid, int(row["line"].split("-")[0])) in BOLD_IDS and ident != "*":
            ident = f"**{ident}**"
        cells = [row["line"], code_cell(row["code"])]
        if mode == WITH:
            cells.append(ident)
        cells += [cell(row["desc"]), cell(row["artifact"]), code_cell(row["refactor"])]
        out.append("| " + " | ".join(cells) + " |")
    if not rows:
        out = ["No lines in this snippet need changes for the target version.", ""] + out
    if after:
        out += ["", after]
    return "\n".join(out) + "\n"


def check(mode, outcomes):
    scen = [0, 0, 0, 0]
    lines = [0, 0, 0]
    for needs, expected, verdicts in outcomes:
        ok_lines = {l for l, v, _ in verdicts if v == "ok"}
        touched = {l for l, _, on_expected in verdicts if on_expected}
        if not needs:
            scen[1 if verdicts else 3] += 1
        elif ok_lines:
            scen[0] += 1
        elif touched:
            scen[1] += 1
        else:
            scen[2] += 1
        lines[0] += len(ok_lines)
        lines[2] += expected - len(ok_lines)
        lines[1] += sum(1 for _, v, _ in verdicts if v != "ok")
    got = (tuple(scen), tuple(lines))
    if got != TARGETS[mode]:
        sys.exit(f"{mode}: plan yields {got}, expected {TARGETS[mode]}")


def main():
    corpus, taxonomy_path, out = map(pathlib.Path, sys.argv[1:4])
    taxonomy = load_taxonomy(taxonomy_path)
    out.mkdir(parents=True, exist_ok=True)
    rendered = {}
    for mode in (WITH, NO):
        outcomes = []
        for index, src in enumerate(sorted(corpus.glob("*.src"))):
            sid = src.stem
            source = src.read_text().split("\n")
            truth = load_truth(src.with_suffix(".truth"))
            rows, verdicts = findings_for(sid, mode, PLAN[sid][mode], source, truth, taxonomy)
            outcomes.append((bool(truth), len(truth), verdicts))
            rendered[f"{sid}.{mode}.resp.txt"] = render(sid, mode, rows, index + (mode == NO))
        check(mode, outcomes)
    for name, text in rendered.items():
        (out / name).write_text(text)
    print(f"wrote {len(rendered)} responses to {out}")


if __name__ == "__main__":
    main()
