from typing import List

import numpy as np
from scipy.sparse.csgraph import connected_components

from tankcodesign.chain.transition import TransitionMatrix


def count_communicating_classes(transitions: TransitionMatrix) -> int:
    """
    Number of strongly connected components of the positive-entry graph.

    Args:
        transitions: Transition matrix.

    Returns:
        Component count; one for an irreducible chain.
    """
    count, _ = connected_components(transitions.matrix, directed=True, connection="strong")
    return int(count)


def closed_classes(transitions: TransitionMatrix) -> List[np.ndarray]:
    """
    States of every closed communicating class.

    A class is closed when no positive entry leaves it. States outside every
    closed class are transient and carry no stationary mass.

    Args:
        transitions: Transition matrix.

    Returns:
        Sorted flat state indices, one array per closed class.
    """
    count, labels = connected_components(transitions.matrix, directed=True, connection="strong")
    coo = transitions.matrix.tocoo()
    leaving = labels[coo.row] != labels[coo.col]
    open_labels = set(labels[coo.row[leaving]].tolist())
    return [np.flatnonzero(labels == label) for label in range(count) if label not in open_labels]


def check_irreducible(transitions: TransitionMatrix) -> bool:
    """
    Check that every state can reach every other state.

    Entries are compared against zero exactly.

    Args:
        transitions: Transition matrix.

    Returns:
        True iff the directed graph of positive entries is strongly connected.
    """
    return count_communicating_classes(transitions) == 1
