import pandas as pd

from tankcodesign.chain.stationary import StationaryDistribution
from tankcodesign.chain.transition import TransitionMatrix


def transition_table(transitions: TransitionMatrix) -> pd.DataFrame:
    """
    Nonzero transitions as `from_i,from_kappa,to_i,to_kappa,prob` rows.

    Args:
        transitions: Transition matrix.

    Returns:
        One row per nonzero entry, sorted by source then target state.
    """
    coo = transitions.matrix.tocoo()
    n1 = transitions.spec.n + 1
    frame = pd.DataFrame(
        {
            "from_i": coo.row % n1,
            "from_kappa": coo.row // n1,
            "to_i": coo.col % n1,
            "to_kappa": coo.col // n1,
            "prob": coo.data,
            "_from": coo.row,
            "_to": coo.col,
        }
    )
    return frame.sort_values(["_from", "_to"]).drop(columns=["_from", "_to"]).reset_index(drop=True)


def stationary_table(distribution: StationaryDistribution) -> pd.DataFrame:
    """
    Stationary probabilities as `i,kappa,pi` rows in flat state order.
    """
    spec = distribution.spec
    states = [spec.state(flat) for flat in range(spec.size)]
    return pd.DataFrame(
        {
            "i": [state.i for state in states],
            "kappa": [state.kappa for state in states],
            "pi": distribution.pi,
        }
    )
