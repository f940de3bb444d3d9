"""Print the branching table for g = 2..20 as aligned text."""

from sixfold.branching import model_table

print(f"{'g':>3} {'p':>2} {'q':>2} {'r':>3}  {'tuple':<14} {'fix(a^3)':>8}  hyperelliptic")
for row in model_table(range(2, 21)):
    p, q, r = row.vector.as_tuple()
    print(f"{row.g:>3} {p:>2} {q:>2} {r:>3}  {str(row.tuple):<14} {row.fp3:>8}  {row.hyperelliptic}")
