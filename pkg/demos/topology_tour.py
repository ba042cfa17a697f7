# %% [markdown]
# # Finite topological orthoalgebras
#
# A finite topology is stored as its specialization preorder: `spec[i, j]`
# means every open set containing i also contains j.

# %%
import time

from oalg.constructors import make_boolean
from oalg.topology import (FiniteTopology, all_topologies, exhaust_toa, from_subbase, is_toa,
                           verify_semilattice_lemma)

# %%
T = from_subbase(3, [[1], [1, 2]])
print(T.opens())
print(T.spec.astype(int))

# %% [markdown]
# Topologies on n points are counted by set partitions times partial orders.

# %%
print([sum(1 for _ in all_topologies(n)) for n in range(1, 5)])

# %% [markdown]
# On the four-element Boolean algebra only the discrete topology makes ⊥
# closed and ⊕, complement continuous.

# %%
b2 = make_boolean(2)
start = time.perf_counter()
found = exhaust_toa(b2)
print(len(found), found[0].is_discrete, f"{time.perf_counter() - start:.2f} s")
print(is_toa(b2, FiniteTopology.indiscrete(4)))

# %% [markdown]
# A finite meet-semilattice whose meet is continuous is stably ordered; check
# every labelled order and topology on up to four points.

# %%
rep = verify_semilattice_lemma(4, up_to_isomorphism=False)
print(rep.orders, rep.pairs_checked, rep.continuous_pairs, len(rep.violations))
