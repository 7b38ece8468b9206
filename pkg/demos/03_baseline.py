# Direct simulation against guarding first and simulating the guarded
# formula afterwards, on a family of unguarded formulas.
from mudis.cli import baseline_family, cmd_baseline_series
from mudis.syntax import size

print("member 3:", baseline_family(3))
series = cmd_baseline_series(range(1, 8))
print("%3s %5s %8s %10s %8s %6s" % ("j", "size", "direct", "automaton", "naive", "gap"))
for r in series["rows"]:
    print("%3d %5d %8d %10d %8d %6d" % (r["index"], size(baseline_family(r["index"])),
                                         r["direct_states"], r["guarded_automaton_states"],
                                         r["naive_states"], r["gap"]))
print("gap strictly increasing:", series["monotone_gap"])
print("naive count grows faster:", series["naive_grows_faster"])
