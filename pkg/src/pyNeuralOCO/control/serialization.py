"""Save and load recorded episodes in the shared container format."""

from __future__ import annotations

from ..core.serialization import PathLike, load_container, save_container
from .costs import cost_from_params
from .types import LtvEpisode, StabilityCertificate


def save_episode(path: PathLike, episode: LtvEpisode):
    meta = {
        "K": episode.K,
        "d_x": episode.dx,
        "d_u": episode.du,
        "W": episode.W,
        "costs": [{"tag": cost.tag, "params": cost.to_params()} for cost in episode.costs],
        "certificate": None if episode.certificate is None else episode.certificate.to_dict(),
        "feedback": episode.feedback is not None,
    }
    tensors = [("A", episode.A), ("B", episode.B), ("w", episode.w), ("x1", episode.x1)]
    if episode.feedback is not None:
        tensors.append(("F", episode.feedback))
    return save_container(path, "ltv_episode", meta, tensors)


def load_episode(path: PathLike) -> LtvEpisode:
    container = load_container(path)
    if container.tag != "ltv_episode":
        raise ValueError(f"Container holds '{container.tag}', not an episode")
    meta, tensors = container.meta, container.tensors
    costs = tuple(cost_from_params(entry["tag"], entry["params"]) for entry in meta["costs"])
    certificate = StabilityCertificate(**meta["certificate"]) if meta["certificate"] else None
    return LtvEpisode(
        tensors["A"], tensors["B"], tensors["w"], tensors["x1"], costs, meta["W"], tensors.get("F"), certificate
    )
