import logging
from collections import Counter

import networkx as nx
import numpy as np

from model.errors import GroupError
from model.group import CayleyGraph, DecouplingGroup

logger = logging.getLogger(__name__)

Edge = tuple[str, str, int]


def build_cayley_graph(group: DecouplingGroup, self_loops: bool = False) -> CayleyGraph:
    """ Baut den Cayley-Graphen G(𝒢, Γ): Kante g -> h·g mit Label h.

    Parameters
    ----------
    group : DecouplingGroup
        Die Gruppe mit Erzeugern Γ.
    self_loops : bool
        Hängt an jeden Knoten eine I_Q-Schleife an (DCG-Variante).

    Returns
    -------
    CayleyGraph
        d Knoten und d·m (+ d) Kanten.
    """
    G = nx.MultiDiGraph()
    G.add_nodes_from(group.elements)
    for g in group.elements:
        for j, h in enumerate(group.generators):
            G.add_edge(g, group.multiply(h, g), generator=j,
                       label=group.generator_names[j], kind="generator")

    reachable = nx.descendants(G, group.identity) | {group.identity}
    missing = [g for g in group.elements if g not in reachable]
    if missing:
        raise GroupError(f"Erzeuger erzeugen nicht die ganze Gruppe, unerreichbar: {missing}")

    if self_loops:
        for g in group.elements:
            G.add_edge(g, g, generator=None, label="I_Q", kind="loop")

    logger.debug("Cayley-Graph %s: %d Knoten, %d Kanten", group.name, G.number_of_nodes(), G.number_of_edges())
    return CayleyGraph(group, G)


def _check_eulerian(graph: CayleyGraph) -> None:
    G = graph.graph
    unbalanced = [v for v in G.nodes if G.in_degree(v) != G.out_degree(v)]
    if unbalanced:
        raise GroupError(f"Graph ist nicht balanciert an {unbalanced}.")
    with_edges = [v for v in G.nodes if G.degree(v) > 0]
    if with_edges and not nx.is_strongly_connected(G.subgraph(with_edges)):
        raise GroupError("Graph ist nicht zusammenhängend.")
    if with_edges and graph.group.identity not in with_edges:
        raise GroupError("Neutrales Element liegt nicht auf dem Graphen.")


def _walk(G: nx.MultiDiGraph, start: str, last: int, used: set, m: int,
          root: str, visited: set) -> list[tuple[str, str, int, dict]]:
    """Läuft von ``start`` bis zur Rückkehr nach ``start`` über ungenutzte Kanten.

    An jedem Knoten wird der Erzeuger (last+1) mod m bevorzugt. Eine ungenutzte
    Schleife wird beim ersten Erreichen eines Knotens genommen, außer am Wurzelknoten.
    """
    path = []
    v = start
    while True:
        if v != root and v not in visited:
            visited.add(v)
            loops = [(v, w, k, d) for _, w, k, d in G.out_edges(v, keys=True, data=True)
                     if d["kind"] == "loop" and (v, w, k) not in used]
            if loops:
                edge = loops[0]
                used.add(edge[:3])
                path.append(edge)
                continue
        candidates = [(v, w, k, d) for _, w, k, d in G.out_edges(v, keys=True, data=True)
                      if d["kind"] == "generator" and (v, w, k) not in used]
        if not candidates:
            break
        edge = min(candidates, key=lambda e: ((e[3]["generator"] - last - 1) % m, e[2]))
        used.add(edge[:3])
        path.append(edge)
        last = edge[3]["generator"]
        v = edge[1]
        if v == start and not any(
            d["kind"] == "generator" and (v, w, k) not in used
            for _, w, k, d in G.out_edges(v, keys=True, data=True)
        ):
            break
    return path


def find_eulerian_cycle(graph: CayleyGraph) -> list[tuple[str, str, dict]]:
    """ Kanonischer Euler-Kreis ab dem neutralen Element (Hierholzer mit Einfügen).

    Die Bevorzugung des nächsten Erzeugers liefert für ℤ₂⊗ℤ₂ die Folge
    X,Y,X,Y,Y,X,Y,X. Die Schleife am Startknoten wird als letzte Kante angehängt.

    Parameters
    ----------
    graph : CayleyGraph
        Balancierter, zusammenhängender Graph.

    Returns
    -------
    list[tuple[str, str, dict]]
        Kanten (u, v, Attribute) in Anwendungsreihenfolge.
    """
    _check_eulerian(graph)
    G = graph.graph
    root = graph.group.identity
    m = max(1, graph.group.n_generators)
    if G.number_of_edges() == 0:
        return []

    used: set = set()
    visited: set = set()
    circuit = _walk(G, root, -1, used, m, root, visited)

    root_loops = [(u, v, k, d) for u, v, k, d in G.edges(keys=True, data=True)
                  if d["kind"] == "loop" and u == root]
    total = G.number_of_edges() - len(root_loops)

    ptr = 0
    while len(used) < total and ptr <= len(circuit):
        vertex = root if ptr == 0 else circuit[ptr - 1][1]
        last = next((e[3]["generator"] for e in reversed(circuit[:ptr]) if e[3]["kind"] == "generator"), -1)
        sub = _walk(G, vertex, last, used, m, root, visited)
        if sub:
            circuit = circuit[:ptr] + sub + circuit[ptr:]
        ptr += 1

    if len(used) < total:
        raise GroupError("Kein Euler-Kreis gefunden.")
    circuit.extend(root_loops)
    return [(u, v, d) for u, v, _, d in circuit]


def random_eulerian_cycle(graph: CayleyGraph, seed: int) -> list[tuple[str, str, dict]]:
    """ Alternativer Euler-Kreis über networkx auf einer gemischten Kantenreihenfolge.

    Parameters
    ----------
    graph : CayleyGraph
        Balancierter Graph.
    seed : int
        Startwert des Zufallsgenerators.

    Returns
    -------
    list[tuple[str, str, dict]]
        Kanten ab dem neutralen Element; eine Schleife am Startknoten steht am Ende.
    """
    _check_eulerian(graph)
    rng = np.random.default_rng(seed)
    edges = list(graph.graph.edges(keys=True, data=True))
    order = rng.permutation(len(edges))
    shuffled = nx.MultiDiGraph()
    shuffled.add_nodes_from(graph.graph.nodes)
    for i in order:
        u, v, _, d = edges[i]
        shuffled.add_edge(u, v, **d)

    root = graph.group.identity
    if shuffled.number_of_edges() == 0:
        return []
    cycle = [(u, v, shuffled.edges[u, v, k]) for u, v, k in nx.eulerian_circuit(shuffled, source=root, keys=True)]

    # Rotation, damit die Startschleife (Q_half) als letzte Kante erscheint
    for i, (u, v, d) in enumerate(cycle):
        if d["kind"] == "loop" and u == root:
            cycle = cycle[i + 1:] + cycle[:i + 1]
            break
    return cycle


def is_valid_cycle(graph: CayleyGraph, cycle: list[tuple[str, str, dict]]) -> bool:
    """Prüft Geschlossenheit, Start/Ende am neutralen Element und Kanten-Multimenge."""
    root = graph.group.identity
    if not cycle:
        return graph.n_edges == 0
    if cycle[0][0] != root or cycle[-1][1] != root:
        return False
    if any(a[1] != b[0] for a, b in zip(cycle, cycle[1:])):
        return False

    def key(u, v, d):
        return (u, v, d["kind"], d["generator"])

    expected = Counter(key(u, v, d) for u, v, d in graph.graph.edges(data=True))
    return Counter(key(*e) for e in cycle) == expected


if __name__ == "__main__":
    from model.group import linear_group

    group, _ = linear_group(2)
    cg = build_cayley_graph(group)
    print(cg, [d["label"] for _, _, d in find_eulerian_cycle(cg)])
    cg_loops = build_cayley_graph(group, self_loops=True)
    print([d["label"] for _, _, d in find_eulerian_cycle(cg_loops)])
