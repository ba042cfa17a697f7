# %% [markdown]
# # Structure of small orthoalgebras
#
# Build a few finite orthoalgebras from the catalog and constructors, then
# look at their order, compatibility blocks, center and dimension strata.

# %%
import numpy as np

from oalg import catalog
from oalg.constructors import make_boolean, make_mo, make_product
from oalg.core import validate
from oalg.structure import (blocks, center, central_decomposition, classify, dimension,
                            is_regular, mackey_decompositions)

# %% [markdown]
# An orthoalgebra is stored as a partial sum table: `plus[a, b]` is the index
# of a ⊕ b, or -1 where the sum is undefined.

# %%
mo2 = make_mo(2)
print(mo2.labels)
print(mo2.plus)
print(validate(mo2).ok)

# %% [markdown]
# The order and complement come from the sum: a ≤ b when a ⊕ c = b for some c.

# %%
order = mo2.order
print(order.leq.astype(int))
print([mo2.label(c) for c in order.comp])

# %% [markdown]
# MO2 is an orthomodular lattice, two Boolean blocks glued at 0 and 1, and its
# center is trivial. x1 and x2 sit in different blocks, so they have no
# Mackey decomposition.

# %%
print(classify(mo2))
print([[mo2.label(a) for a in b] for b in blocks(mo2)])
print([mo2.label(a) for a in center(mo2)])
print(mackey_decompositions(mo2, mo2.index("x1"), mo2.index("x2")))

# %% [markdown]
# Products pick up the centers of their factors, and the central
# decomposition splits them back apart.

# %%
t = make_product([make_boolean(2), mo2])
dec = central_decomposition(t)
print(t.size, len(center(t)), dec.sizes)

# %% [markdown]
# The loop of three Boolean blocks is the standard non-orthocoherent example:
# a, c, e are pairwise orthogonal but have no joint sum, and the maximal
# compatible set containing them is not a Boolean block.

# %%
loop = catalog.get("loop3").table()
flags = classify(loop)
print(flags.is_orthocoherent, flags.is_omp)
reg = is_regular(loop)
print(bool(reg), sorted(loop.label(a) for a in reg.witness))

# %% [markdown]
# Dimension counts the fewest atoms summing to an element.

# %%
dim = dimension(loop)
print(dict(zip(loop.labels, dim.tolist())))
print(np.bincount(dim))
