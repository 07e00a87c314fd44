"""Constraint-aware multilevel partitioner with Fiduccia-Mattheyses refinement.

The graph is shrunk by repeated heavy-edge matching (never contracting an
edge between two charged nodes, and never across the fragments of an optional
guide partition), partitioned at the coarsest level by region growing, then
projected back level by level with a rebalancing step and FM passes at each
level. Coarse nodes carry the count of contained fine nodes, so the size
constraint is always evaluated in fine-node weight; the gap constraint only
applies on the finest level, where node ids are chain positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .graph import (
    UNASSIGNED,
    InfeasibleError,
    Partition,
    PartitionConstraints,
    ProteinGraph,
    cut_weight,
    check_constraints,
)
from .repair import move_respects_gap, repair_partition

COARSEST_FLOOR = 20  # stop coarsening at max(2k, this many) nodes
MIN_SHRINK = 0.05


@dataclass
class CoarseningHierarchy:
    """Coarsened graph sequence with fine-to-coarse node maps.

    levels[0] is the input graph; fine_to_coarse[i][v] is the level-(i+1)
    node containing level-i node v. node_weights[i][v] counts the fine
    (level-0) nodes inside v; a coarse node is charged iff it contains a
    charged fine node, and contains at most one by construction.
    """

    levels: list[ProteinGraph]
    fine_to_coarse: list[list[int]]
    node_weights: list[list[int]]

    @property
    def coarsest(self) -> ProteinGraph:
        return self.levels[-1]

    def project_to_coarsest(self, p: Partition) -> list[int]:
        """Lift a finest-level partition to coarsest-level labels.

        Requires the partition to be constant on every coarse node, which
        holds for a partition used as the coarsening guide.
        """
        labels = list(p.assignment)
        for mapping in self.fine_to_coarse:
            coarse_n = max(mapping) + 1
            lifted = [-1] * coarse_n
            for fine, coarse in enumerate(mapping):
                if lifted[coarse] == -1:
                    lifted[coarse] = labels[fine]
                elif lifted[coarse] != labels[fine]:
                    raise ValueError("partition is not constant on a coarse node")
            labels = lifted
        return labels


def _match_round(
    g: ProteinGraph,
    weights: Sequence[int],
    max_size: int,
    guide_labels: Optional[Sequence[int]],
) -> list[int]:
    """Greedy heavy-edge matching. match[v] is v's partner or -1.

    Nodes are visited in ascending id and matched to the heaviest compatible
    unmatched neighbor (ties to the smallest id, which comes first in the
    sorted adjacency). Two charged nodes are never matched, merged weight may
    not exceed max_size, and matching never crosses guide fragments.
    """
    n = g.node_count
    match = [-1] * n
    for u in range(n):
        if match[u] != -1:
            continue
        best_v = -1
        best_w = 0.0
        for v, w in g.adjacency[u]:
            if match[v] != -1:
                continue
            if g.charged[u] and g.charged[v]:
                continue
            if weights[u] + weights[v] > max_size:
                continue
            if guide_labels is not None and guide_labels[u] != guide_labels[v]:
                continue
            if w > best_w:
                best_w = w
                best_v = v
        if best_v != -1:
            match[u] = best_v
            match[best_v] = u
    return match


def _contract(
    g: ProteinGraph, weights: Sequence[int], match: Sequence[int]
) -> tuple[ProteinGraph, list[int], list[int]]:
    """Merge matched pairs; returns (coarse graph, mapping, coarse weights)."""
    n = g.node_count
    mapping = [-1] * n
    next_id = 0
    for u in range(n):
        if mapping[u] != -1:
            continue
        mapping[u] = next_id
        partner = match[u]
        if partner != -1:
            mapping[partner] = next_id
        next_id += 1

    coarse_weights = [0] * next_id
    charged_flag = [False] * next_id
    for u in range(n):
        cu = mapping[u]
        coarse_weights[cu] += weights[u]
        if g.charged[u]:
            charged_flag[cu] = True
    coarse_charged = [v for v, f in enumerate(charged_flag) if f]

    combined: dict[tuple[int, int], float] = {}
    for u, v, w in g.edges:
        cu, cv = mapping[u], mapping[v]
        if cu == cv:
            continue
        key = (cu, cv) if cu < cv else (cv, cu)
        combined[key] = combined.get(key, 0.0) + w
    coarse = ProteinGraph.from_edges(
        next_id, [(a, b, w) for (a, b), w in combined.items()], coarse_charged
    )
    return coarse, mapping, coarse_weights


def coarsen(
    g: ProteinGraph, c: PartitionConstraints, guide: Optional[Partition] = None
) -> CoarseningHierarchy:
    """Build the coarsening hierarchy down to max(2k, 20) nodes.

    Stops early when a matching round would shrink the node count by less
    than 5% (for example when every remaining edge joins two charged nodes).
    """
    levels = [g]
    maps: list[list[int]] = []
    node_weights: list[list[int]] = [[1] * g.node_count]
    guide_labels: Optional[list[int]] = list(guide.assignment) if guide else None
    floor = max(2 * c.k, COARSEST_FLOOR)

    while levels[-1].node_count > floor:
        current = levels[-1]
        weights = node_weights[-1]
        match = _match_round(current, weights, c.max_size, guide_labels)
        matched_pairs = sum(1 for v in match if v != -1) // 2
        if matched_pairs < MIN_SHRINK * current.node_count:
            break
        coarse, mapping, coarse_weights = _contract(current, weights, match)
        levels.append(coarse)
        maps.append(mapping)
        node_weights.append(coarse_weights)
        if guide_labels is not None:
            lifted = [-1] * coarse.node_count
            for fine, cv in enumerate(mapping):
                lifted[cv] = guide_labels[fine]
            guide_labels = lifted

    return CoarseningHierarchy(levels=levels, fine_to_coarse=maps, node_weights=node_weights)


def _connection_table(
    g: ProteinGraph, assignment: Sequence[int], fragment_count: int
) -> list[list[float]]:
    rows = [[0.0] * fragment_count for _ in range(g.node_count)]
    for u, v, w in g.edges:
        rows[u][assignment[v]] += w
        rows[v][assignment[u]] += w
    return rows


def _bfs_distances(g: ProteinGraph, source: int) -> list[float]:
    dist = [float("inf")] * g.node_count
    dist[source] = 0
    queue = [source]
    while queue:
        next_queue = []
        for u in queue:
            for v, _w in g.adjacency[u]:
                if dist[v] == float("inf"):
                    dist[v] = dist[u] + 1
                    next_queue.append(v)
        queue = next_queue
    return dist


def initial_partition(
    coarsest: ProteinGraph,
    c: PartitionConstraints,
    guide: Optional[Partition] = None,
    node_weights: Optional[Sequence[int]] = None,
) -> Partition:
    """Partition the coarsest graph by growing k regions from spread seeds.

    Seeds come from a farthest-first traversal (hop distance) starting at
    node 0. Regions absorb their most strongly connected admissible neighbor,
    lightest region first. If a guide partition is given, the grown and guide
    partitions compete: feasibility first, then smaller cut, guide on ties.
    """
    n = coarsest.node_count
    k = c.k
    if n < k:
        raise InfeasibleError(f"cannot place {k} seeds on {n} coarse nodes")
    weights = list(node_weights) if node_weights is not None else [1] * n

    seeds = [0]
    min_dist = _bfs_distances(coarsest, 0)
    while len(seeds) < k:
        best = -1
        best_d = -1.0
        for v in range(n):
            if v in seeds:
                continue
            if min_dist[v] > best_d:
                best_d = min_dist[v]
                best = v
        seeds.append(best)
        d = _bfs_distances(coarsest, best)
        for v in range(n):
            if d[v] < min_dist[v]:
                min_dist[v] = d[v]

    assignment = [UNASSIGNED] * n
    wsum = [0] * k
    charges = [0] * k
    conn = [[0.0] * k for _ in range(n)]

    def attach(v: int, f: int) -> None:
        assignment[v] = f
        wsum[f] += weights[v]
        if coarsest.charged[v]:
            charges[f] += 1
        for u, w in coarsest.adjacency[v]:
            if assignment[u] == UNASSIGNED:
                conn[u][f] += w

    for f, s in enumerate(seeds):
        attach(s, f)

    unassigned = n - k
    while unassigned > 0:
        placed = False
        for f in sorted(range(k), key=lambda f: (wsum[f], f)):
            best = -1
            best_conn = 0.0
            for v in range(n):
                if assignment[v] != UNASSIGNED or conn[v][f] <= best_conn:
                    continue
                if wsum[f] + weights[v] > c.max_size:
                    continue
                if c.enforce_charge and coarsest.charged[v] and charges[f] >= 1:
                    continue
                best = v
                best_conn = conn[v][f]
            if best != -1:
                attach(best, f)
                unassigned -= 1
                placed = True
                break
        if not placed:
            # stuck: place the smallest unassigned node into the lightest
            # fragment that tolerates it, or the lightest overall
            v = assignment.index(UNASSIGNED)
            order = sorted(range(k), key=lambda f: (wsum[f], f))
            target = order[0]
            for f in order:
                if wsum[f] + weights[v] > c.max_size:
                    continue
                if c.enforce_charge and coarsest.charged[v] and charges[f] >= 1:
                    continue
                target = f
                break
            attach(v, target)
            unassigned -= 1

    grown = Partition.from_assignment(assignment, coarsest.charged)
    if guide is None:
        return grown

    def feasible(p: Partition) -> bool:
        ws = [0] * p.fragment_count
        qs = [0] * p.fragment_count
        for v, f in enumerate(p.assignment):
            ws[f] += weights[v]
            if coarsest.charged[v]:
                qs[f] += 1
        if any(w > c.max_size for w in ws):
            return False
        if c.enforce_charge and any(q > 1 for q in qs):
            return False
        return p.fragment_count == c.k

    grown_ok = feasible(grown)
    guide_ok = feasible(guide)
    if guide_ok and not grown_ok:
        return guide
    if grown_ok and not guide_ok:
        return grown
    if not grown_ok and not guide_ok:
        return grown
    if cut_weight(coarsest, guide) <= cut_weight(coarsest, grown):
        return guide
    return grown


def project(p: Partition, level: int, h: CoarseningHierarchy) -> Partition:
    """Pull a level+1 partition down to ``level``; cut weight is unchanged."""
    mapping = h.fine_to_coarse[level]
    coarse_assignment = p.assignment
    fine_assignment = [coarse_assignment[mapping[v]] for v in range(len(mapping))]
    return Partition.from_assignment(fine_assignment, h.levels[level].charged)


def rebalance(
    g_level: ProteinGraph,
    p: Partition,
    c: PartitionConstraints,
    node_weights: Optional[Sequence[int]] = None,
) -> Partition:
    """Evict nodes from oversize or multiply-charged fragments.

    Repeatedly takes the offending fragment with the smallest id and moves
    out the member losing the least internal connection, into the admissible
    fragment it is most connected to. Raises InfeasibleError when stuck, for
    example with more charges than fragments.
    """
    n = g_level.node_count
    k = p.fragment_count
    weights = list(node_weights) if node_weights is not None else [1] * n
    assignment = list(p.assignment)
    conn = _connection_table(g_level, assignment, k)
    wsum = [0] * k
    node_cnt = [0] * k
    charges = [0] * k
    for v, f in enumerate(assignment):
        wsum[f] += weights[v]
        node_cnt[f] += 1
        if g_level.charged[v]:
            charges[f] += 1

    if c.enforce_charge and sum(charges) > k:
        raise InfeasibleError(
            f"{sum(charges)} charges cannot spread over {k} fragments"
        )

    moves = 0
    while True:
        offender = -1
        for f in range(k):
            if wsum[f] > c.max_size or (c.enforce_charge and charges[f] > 1):
                offender = f
                break
        if offender == -1:
            break
        if moves >= n * k:
            raise InfeasibleError("rebalancing made no progress")

        charge_fix = c.enforce_charge and charges[offender] > 1
        candidates = [
            v
            for v in range(n)
            if assignment[v] == offender
            and (not charge_fix or g_level.charged[v])
        ]
        candidates.sort(key=lambda v: (conn[v][offender], v))
        moved = False
        for v in candidates:
            if node_cnt[offender] <= 1:
                break
            best_t = -1
            best_conn = -1.0
            for t in range(k):
                if t == offender:
                    continue
                if wsum[t] + weights[v] > c.max_size:
                    continue
                if c.enforce_charge and g_level.charged[v] and charges[t] >= 1:
                    continue
                if conn[v][t] > best_conn:
                    best_conn = conn[v][t]
                    best_t = t
            if best_t == -1:
                continue
            assignment[v] = best_t
            wsum[offender] -= weights[v]
            wsum[best_t] += weights[v]
            node_cnt[offender] -= 1
            node_cnt[best_t] += 1
            if g_level.charged[v]:
                charges[offender] -= 1
                charges[best_t] += 1
            for u, w in g_level.adjacency[v]:
                conn[u][offender] -= w
                conn[u][best_t] += w
            moves += 1
            moved = True
            break
        if not moved:
            raise InfeasibleError(
                f"fragment {offender} cannot be rebalanced under max_size={c.max_size}"
            )

    return Partition.from_assignment(assignment, g_level.charged)


def fm_refine(
    g_level: ProteinGraph,
    p: Partition,
    c: PartitionConstraints,
    node_weights: Optional[Sequence[int]] = None,
) -> tuple[Partition, float]:
    """One Fiduccia-Mattheyses pass; returns (partition, cut improvement).

    Every node is considered at most once, taken from the fragment with the
    most pending nodes, choosing the pending node with the best admissible
    move. Moves must keep size, charge, and (if active) gap constraints
    satisfied and may not empty a fragment; they are applied even at negative
    gain, and the best prefix of the move sequence is kept, so the result is
    never worse than the input. The improvement is >= 0 by construction.
    """
    n = g_level.node_count
    k = p.fragment_count
    weights = list(node_weights) if node_weights is not None else [1] * n
    assignment = list(p.assignment)
    conn = _connection_table(g_level, assignment, k)
    wsum = [0] * k
    node_cnt = [0] * k
    charges = [0] * k
    for v, f in enumerate(assignment):
        wsum[f] += weights[v]
        node_cnt[f] += 1
        if g_level.charged[v]:
            charges[f] += 1

    input_cut = cut_weight(g_level, p)
    pending: list[list[int]] = [[] for _ in range(k)]
    for v, f in enumerate(assignment):
        pending[f].append(v)

    def best_move(v: int) -> tuple[float, int]:
        """Highest-gain admissible target for v, or (gain, -1) if none."""
        f = assignment[v]
        row = conn[v]
        internal = row[f]
        best_gain = -float("inf")
        best_t = -1
        if node_cnt[f] <= 1:
            return best_gain, best_t
        for t in range(k):
            if t == f:
                continue
            if wsum[t] + weights[v] > c.max_size:
                continue
            if c.enforce_charge and g_level.charged[v] and charges[t] >= 1:
                continue
            if c.enforce_gap and not move_respects_gap(assignment, n, v, t):
                continue
            gain = row[t] - internal
            if gain > best_gain:
                best_gain = gain
                best_t = t
        return best_gain, best_t

    moves: list[tuple[int, int, int]] = []  # (node, from, to)
    running_cut = input_cut
    best_cut = input_cut
    best_prefix = 0

    while True:
        source = -1
        most = 0
        for f in range(k):
            if len(pending[f]) > most:
                most = len(pending[f])
                source = f
        if source == -1:
            break
        chosen = -1
        chosen_gain = -float("inf")
        chosen_t = -1
        for v in pending[source]:
            gain, t = best_move(v)
            if t != -1 and gain > chosen_gain:
                chosen_gain = gain
                chosen = v
                chosen_t = t
        if chosen == -1:
            pending[source] = []  # nobody in this queue can move
            continue
        pending[source].remove(chosen)
        f = source
        t = chosen_t
        assignment[chosen] = t
        wsum[f] -= weights[chosen]
        wsum[t] += weights[chosen]
        node_cnt[f] -= 1
        node_cnt[t] += 1
        if g_level.charged[chosen]:
            charges[f] -= 1
            charges[t] += 1
        for u, w in g_level.adjacency[chosen]:
            conn[u][f] -= w
            conn[u][t] += w
        running_cut -= chosen_gain
        moves.append((chosen, f, t))
        if running_cut < best_cut:
            best_cut = running_cut
            best_prefix = len(moves)

    # roll back to the best prefix
    for v, f, _t in reversed(moves[best_prefix:]):
        assignment[v] = f
    if best_prefix == 0:
        return p.copy(), 0.0

    refined = Partition.from_assignment(assignment, g_level.charged)
    exact_cut = cut_weight(g_level, refined)
    if exact_cut >= input_cut:
        # accumulated float error ate the logged improvement; keep the input
        return p.copy(), 0.0
    return refined, input_cut - exact_cut


def multilevel_partition(
    g: ProteinGraph,
    c: PartitionConstraints,
    guide: Optional[Partition] = None,
) -> Partition:
    """Full multilevel cycle: coarsen, seed, then project/rebalance/refine.

    The optional guide partition steers coarsening and competes with the
    grown partition at the coarsest level. FM repeats on each level until a
    pass yields no improvement. If the finest result still violates the gap
    constraint (possible because contraction groups arbitrary node pairs), a
    terminal repair sweep restores it.
    """
    if c.k > g.node_count:
        raise InfeasibleError(f"k={c.k} exceeds node count {g.node_count}")
    hierarchy = coarsen(g, c, guide)
    coarse_guide: Optional[Partition] = None
    if guide is not None:
        labels = hierarchy.project_to_coarsest(guide)
        coarse_guide = Partition.from_sparse_assignment(
            labels, hierarchy.coarsest.charged
        )

    partition = initial_partition(
        hierarchy.coarsest, c, coarse_guide, hierarchy.node_weights[-1]
    )

    def refine(level: int, p: Partition) -> Partition:
        g_level = hierarchy.levels[level]
        weights = hierarchy.node_weights[level]
        level_c = c if level == 0 else c.without_gap()
        p = rebalance(g_level, p, level_c, weights)
        while True:
            p, gain = fm_refine(g_level, p, level_c, weights)
            if gain == 0:
                return p

    if len(hierarchy.levels) == 1:
        partition = refine(0, partition)
    else:
        for level in range(len(hierarchy.levels) - 2, -1, -1):
            partition = project(partition, level, hierarchy)
            partition = refine(level, partition)

    if not check_constraints(g, partition, c).ok:
        partition = repair_partition(g, partition, c)
    return partition
