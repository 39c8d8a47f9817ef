"""End-to-end checks of the graphctl command line. Usage: cli_test.py <graphctl> <workdir>"""
import json
import math
import os
import subprocess
import sys

BIN, WORK = sys.argv[1], sys.argv[2]
os.makedirs(WORK, exist_ok=True)
failures = []


def run(*args, code=0, stdin=None):
    p = subprocess.run([BIN, *args], capture_output=True, text=True, input=stdin)
    if p.returncode != code:
        failures.append(f"{' '.join(args[:2])}: exit {p.returncode}, expected {code}: {p.stderr.strip()}")
    return p


def report(*args):
    return json.loads(run(*args).stdout)


def check(cond, what):
    if not cond:
        failures.append(what)


x = run("scenario", "x_graph", "sqrt(2)", "1").stdout
check(report("check-ggcc", x)["results"]["holds"] is False, "X graph should fail the GGCC")

bot = run("scenario", "bot_graph", "3", "2", "1").stdout
ot = report("optimal-time", bot)["results"]
check(ot["T_star"] == 4.0 and ot["L"] == 5.0, f"bot graph times {ot}")

rows = run("spectrum", run("scenario", "interval", "1").stdout, "--kmax", "10").stdout.splitlines()[1:]
ks = [float(r.split(",")[0]) for r in rows]
check(len(ks) == 3 and all(abs(k - (i + 1) * math.pi) < 1e-9 for i, k in enumerate(ks)), f"interval spectrum {ks}")

# Round trip: file, stdin and inline JSON give the same results.
path = os.path.join(WORK, "bot.json")
run("scenario", "bot_graph", "3", "2", "1", "-o", path)
for cmd in (["check-ggcc"], ["optimal-time"], ["observability", "--T", "4.2"]):
    a = report(*cmd, bot)
    b = report(*cmd, path)
    c = json.loads(run(*cmd, "-", stdin=bot).stdout)
    check(a["results"] == b["results"] == c["results"], f"{cmd[0]} differs between inline, file and stdin")
    check(a["input_digest"] == b["input_digest"], f"{cmd[0]} digest differs")
    check(a["version"] == "0.1.0", "version field")

cf = report("diophantine", "cf", "e", "--depth", "12")["results"]
check(cf["quotients"] == [2, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1, 8], f"cf of e {cf}")

sim = report("simulate", bot, "--pulse", "edge=0,center=1.5,width=0.5,kind=velocity", "--T", "3")["results"]
check(abs(sim["final_energy"] - sim["initial_energy"]) <= 1e-12 * sim["initial_energy"], f"simulate energy {sim}")

run("check-ggcc", "{", code=2)
run("check-ggcc", os.path.join(WORK, "missing.json"), code=2)
run("spectrum", bot, "--kmax", "-1", code=2)
run("quasimode", x, "--n-list", "1073741824", code=3)
run("quasimode", bot, code=2)
run("frobnicate", code=2)

if failures:
    print("\n".join(failures))
    sys.exit(1)
print("cli: all checks passed")
