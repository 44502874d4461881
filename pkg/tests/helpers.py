import random

from models.complex import OrientedPseudomanifold
from models.cover import Cover
from services.cover import covering_simplex


def random_labels(M: OrientedPseudomanifold, num_sets: int, rng: random.Random,
                  multi: float = 0.0, tries: int = 200) -> Cover:
    """
    Random cover without covering simplex. Vertices get a second label with
    probability `multi`; labelings that cover some facet are redrawn and the
    last resort is singletons, which never cover when num_sets > dim + 1.
    """
    for _ in range(tries):
        labels = {}
        for v in M.vertex_ids:
            chosen = {rng.randrange(num_sets)}
            if rng.random() < multi:
                chosen.add(rng.randrange(num_sets))
            labels[v] = tuple(sorted(chosen))
        cover = Cover(num_sets=num_sets, labels=labels)
        if covering_simplex(M.complex, cover) is None:
            return cover
    return Cover(num_sets=num_sets, labels={v: (rng.randrange(num_sets),) for v in M.vertex_ids})
