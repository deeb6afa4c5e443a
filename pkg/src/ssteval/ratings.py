"""Continuous Rating aggregation.

Two definitions of a session's score: the plain average of all clicks (CR,
every click weighs the same) and the interval-weighted average (CRi, each
click's value holds from its timestamp to the next click, the last one
until the end of the document). When clicks are uniformly spaced and the
terminal gap equals the spacing, the two are identical.
"""

from statistics import fmean

from .types import RatingScore, ValidationError


def cr(session) -> float:
    """Plain average of the session's click values."""
    if not session.clicks:
        raise ValidationError("unrated session: no clicks to average")
    return fmean(click.value for click in session.clicks)


def cri(session) -> float:
    """Interval-weighted average: value r_i weighted by t_{i+1} - t_i, the
    final value by T - t_n, normalized by T - t_1. Reduces to r_1 for a
    single click; if the only click sits exactly at T the weighting
    degenerates and the last value is returned.
    """
    clicks = session.clicks
    if not clicks:
        raise ValidationError("unrated session: no clicks to average")
    t_first = clicks[0].t_ms
    t_total = session.duration_ms
    if t_first >= t_total:
        return float(clicks[-1].value)
    weighted = 0.0
    for i in range(len(clicks) - 1):
        weighted += (clicks[i + 1].t_ms - clicks[i].t_ms) * clicks[i].value
    weighted += (t_total - clicks[-1].t_ms) * clicks[-1].value
    return weighted / (t_total - t_first)


def session_score(session, definition="CR") -> float:
    if definition == "CR":
        return cr(session)
    if definition == "CRi":
        return cri(session)
    raise ValidationError(f"unknown rating definition {definition!r}")


def aggregate_ratings(sessions) -> dict:
    """Unweighted per-candidate mean over sessions, both definitions at
    once: (doc_id, system, latency) -> RatingScore. Candidates without any
    session simply do not appear."""
    groups = {}
    for session in sessions:
        groups.setdefault(session.candidate_key, []).append(session)
    scores = {}
    for key in sorted(groups):
        group = groups[key]
        doc_id, system_id, latency = key
        scores[key] = RatingScore(
            doc_id=doc_id,
            system_id=system_id,
            latency=latency,
            cr=fmean(cr(s) for s in group),
            cri=fmean(cri(s) for s in group),
            n_sessions=len(group),
        )
    return scores
