# %% [markdown]
# # Exact state spaces
#
# A state is a map f into [0, 1] with f(1) = 1 and f(a ⊕ b) = f(a) + f(b).
# States form a rational polytope; everything here is computed with
# `fractions.Fraction`.

# %%
from oalg import catalog
from oalg.states import (FULL, exists_separating_state, fraction_str, is_order_determining,
                         maximize_state, state_constraints, vertices)


def show(f, t):
    return {t.label(a): fraction_str(v) for a, v in enumerate(f)}


# %% [markdown]
# MO2 has two free parameters, so its state space is a square.

# %%
mo2 = catalog.get("mo-2").table()
poly = state_constraints(mo2)
for f in vertices(poly):
    print(show(f, mo2))

# %% [markdown]
# The loop of three blocks has five extreme states. One of them gives 1/2 to
# each of a, c, e, which no Boolean algebra could do with three pairwise
# orthogonal elements.

# %%
loop = catalog.get("loop3").table()
lp = state_constraints(loop)
for f in vertices(lp):
    print({x: fraction_str(f[loop.index(x)]) for x in "abcdef"})

# %% [markdown]
# Linear objectives are maximized by an exact simplex.

# %%
c = [0] * loop.size
for x in "ace":
    c[loop.index(x)] = 1
value, f = maximize_state(lp, c)
print(value)

# %% [markdown]
# The full state space determines the order: whenever p ≰ q some state has
# f(p) > f(q).

# %%
od = is_order_determining(loop, FULL)
print(od.determining, len(od.states))
p, q = loop.index("a"), loop.index("b")
f = exists_separating_state(lp, p, q)
print(fraction_str(f[p]), fraction_str(f[q]))
