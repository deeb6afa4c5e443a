"""Pure-Python alignment kernels; same contract as the compiled twin."""

BACKEND_NAME = "python"


def edit_distance(a, b):
    """Word-level Levenshtein distance between two id sequences."""
    n = len(b)
    prev = list(range(n + 1))
    cur = [0] * (n + 1)
    for i, x in enumerate(a, start=1):
        cur[0] = i
        for j in range(1, n + 1):
            sub = prev[j - 1] + (x != b[j - 1])
            ins = cur[j - 1] + 1
            dele = prev[j] + 1
            cur[j] = sub if sub <= ins and sub <= dele else (ins if ins <= dele else dele)
        prev, cur = cur, prev
    return prev[n]


def mwer_partition(hyp, ref, offsets):
    """Minimum-total-edit-distance partition of hyp into len(offsets)-1
    contiguous spans matched against the ref segments delimited by offsets.

    hyp: hypothesis token ids; ref: all reference segments concatenated;
    offsets: cumulative reference token counts, offsets[0] == 0 and
    offsets[-1] == len(ref).

    Returns (hyp_offsets, cost): hyp_offsets has the same length as offsets,
    starts at 0, ends at len(hyp), and among all cost-minimal partitions is
    the lexicographically smallest (leftmost boundaries).
    """
    n = len(hyp)
    big_r = len(ref)
    m = len(offsets) - 1

    # suffix DP: g[j] = edit distance between ref[r:] and hyp[j:]; snapshot
    # the row at every segment boundary (scanning r downward)
    g = list(range(n, -1, -1))  # r == big_r: remaining hyp is unmatched
    snapshots = {}
    next_snap = m
    while next_snap >= 0 and offsets[next_snap] == big_r:
        snapshots[next_snap] = list(g)
        next_snap -= 1
    for r in range(big_r - 1, -1, -1):
        tok = ref[r]
        new = [0] * (n + 1)
        new[n] = big_r - r
        for j in range(n - 1, -1, -1):
            sub = g[j + 1] + (tok != hyp[j])
            dele = g[j] + 1
            ins = new[j + 1] + 1
            new[j] = sub if sub <= dele and sub <= ins else (dele if dele <= ins else ins)
        g = new
        while next_snap >= 0 and offsets[next_snap] == r:
            snapshots[next_snap] = list(g)
            next_snap -= 1

    total = snapshots[0][0]

    # walk segments left to right; each boundary is the leftmost hyp
    # position from which the fixed prefix still extends to an optimal whole
    bounds = [0]
    prefix_cost = 0
    start = 0
    for i in range(1, m):
        seg = ref[offsets[i - 1] : offsets[i]]
        length = n - start
        row = list(range(length + 1))
        for tok in seg:
            new = [row[0] + 1] + [0] * length
            for jj in range(1, length + 1):
                sub = row[jj - 1] + (tok != hyp[start + jj - 1])
                dele = row[jj] + 1
                ins = new[jj - 1] + 1
                new[jj] = sub if sub <= dele and sub <= ins else (dele if dele <= ins else ins)
            row = new
        suffix = snapshots[i]
        for j in range(start, n + 1):
            if prefix_cost + row[j - start] + suffix[j] == total:
                bounds.append(j)
                prefix_cost += row[j - start]
                start = j
                break
        else:  # pragma: no cover - the DP guarantees a feasible boundary
            raise AssertionError("no feasible boundary found")
    bounds.append(n)
    return bounds, total
