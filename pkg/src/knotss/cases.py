"""Concrete bounding-chain constructions for the arity-4 and arity-5
cocycles, and the three-term relation used for the page-2 differential.

Chains are assembled from the generic constructors in chainledger; the
graph lists, pairing data, and expected identities are checked-in data
(data/cases.json) interpreted by run_case.
"""

import json
import os
from fractions import Fraction

from .chainledger import (Chain, MapExpr, ZeroFacts, apply_delta, apply_facts,
                          boundary_D, contraction, ee_contraction, f_graph,
                          i_contraction, single, straight)
from .partgraph import PGraph, delta_graph, parse_graph


def subgraph(G, drop):
    return PGraph(G.partition, tuple(e for e in G.edges if e not in drop))


def merged_graph(i, G):
    hit = delta_graph(i, G)
    if hit is None:
        raise ValueError("merge %d kills %s" % (i, G))
    return hit[0]


def merged_edge(i, G, e):
    return merged_graph(i, PGraph(G.partition, (e,))).edges[0]


def homotopy_target(f, fp, i):
    """The straight homotopy goes to fp when the i-th components agree
    and to fp composed with the factor swap of the two spheres when
    they differ."""
    return fp if f.comps[i - 1] == fp.comps[i - 1] else fp.swap_xy()


def pair_data(G, H, i):
    """Shared data for a two-graph chain: maps, merged graphs, and the
    edge identification E(G) = E(delta_i G) = E(delta_i H) = E(H)."""
    f, fp = f_graph(G), f_graph(H)
    dG, dH = merged_graph(i, G), merged_graph(i, H)
    if dG.edges != dH.edges:
        raise ValueError("merged graphs differ; no pair chain")
    himg = {merged_edge(i, H, e): e for e in H.edges}
    edges = []
    for e in G.edges:
        ebar = merged_edge(i, G, e)
        edges.append((e, ebar, himg[ebar]))
    psi = straight(f, homotopy_target(f, fp, i), "t")
    return f, fp, dG, dH, edges, psi


# ---------------------------------------------------------------------------
# arity 4 (two-edge graphs, coefficients mod 2)


def chain_c_ch2(G):
    """c(G) = f(w_0) + f_1(w_1) + f_2(w_1)."""
    f = f_graph(G)
    ch = single(1, f, [], G)
    for e in G.edges:
        ch = ch + single(1, contraction(f, G, e, "a"), [("s", "a")],
                         subgraph(G, (e,)))
    return ch


def chain_pair_ch2(G, H, i):
    """c(G,H,i) = psi(w_01) + sum_j (psi_j + lambda_j + lambda'_j)(w_11)."""
    f, fp, dG, dH, edges, psi = pair_data(G, H, i)
    ch = single(1, psi, [("t", "t")], dG)
    for (e, ebar, eh) in edges:
        label = subgraph(dG, (ebar,))
        lam = straight(contraction(f, G, e, "a"),
                       contraction(f, dG, ebar, "a"), "t")
        lamp = straight(contraction(fp, H, eh, "a"),
                        contraction(fp, dH, ebar, "a"), "t")
        psij = contraction(psi, dG, ebar, "a")
        for expr in (psij, lam, lamp):
            ch = ch + single(1, expr, [("s", "a"), ("t", "t")], label)
    return ch


# ---------------------------------------------------------------------------
# arity 5 (three-edge graphs, signed convention)


def chain_c_ch3(G):
    """c(G) = f(w_0) + sum_j (-1)^j f_j(w_1)
                     + sum_{j<k} (-1)^{j+k+1} f_{jk}(w_2)."""
    f = f_graph(G)
    ch = single(1, f, [], G)
    for j, e in enumerate(G.edges, 1):
        ch = ch + single((-1) ** j, contraction(f, G, e, "a"),
                         [("s", "a")], subgraph(G, (e,)))
    for j in range(1, len(G.edges) + 1):
        for k in range(j + 1, len(G.edges) + 1):
            ej, ek = G.edges[j - 1], G.edges[k - 1]
            expr = ee_contraction(f, G, ej, ek, "a", "b")
            ch = ch + single((-1) ** (j + k + 1), expr,
                             [("s", "a"), ("s", "b")], subgraph(G, (ej, ek)))
    return ch


def chain_pair_ch3(G, H, i):
    """c(G,H,i) with the alternating signs of the three-edge setting."""
    f, fp, dG, dH, edges, psi = pair_data(G, H, i)
    ch = single(1, psi, [("t", "t")], dG)
    for j, (e, ebar, eh) in enumerate(edges, 1):
        sign = (-1) ** (j + 1)
        label = subgraph(dG, (ebar,))
        lam = straight(contraction(f, G, e, "a"),
                       contraction(f, dG, ebar, "a"), "t")
        lamp = straight(contraction(fp, H, eh, "a"),
                        contraction(fp, dH, ebar, "a"), "t")
        psij = contraction(psi, dG, ebar, "a")
        w = [("s", "a"), ("t", "t")]
        ch = ch + single(sign, psij, w, label) + single(sign, lam, w, label) \
            + single(-sign, lamp, w, label)
    for j in range(1, len(edges) + 1):
        for k in range(j + 1, len(edges) + 1):
            sign = (-1) ** (j + k + 1)
            (ej, ebj, ehj), (ek, ebk, ehk) = edges[j - 1], edges[k - 1]
            label = subgraph(dG, (ebj, ebk))
            lam = straight(ee_contraction(f, G, ej, ek, "a", "b"),
                           ee_contraction(f, dG, ebj, ebk, "a", "b"), "t")
            lamp = straight(ee_contraction(fp, H, ehj, ehk, "a", "b"),
                            ee_contraction(fp, dH, ebj, ebk, "a", "b"), "t")
            psijk = ee_contraction(psi, dG, ebj, ebk, "a", "b")
            w = [("s", "a"), ("s", "b"), ("t", "t")]
            ch = ch + single(sign, psijk, w, label) \
                + single(sign, lam, w, label) + single(-sign, lamp, w, label)
    return ch


def chain_cycle_ch3(G, i):
    """c(G,i): separating contractions averaged over both signs; terms
    whose merged label acquires a double edge are zero and dropped."""
    f = f_graph(G)
    half = Fraction(1, 2)
    ch = Chain()
    m = len(G.edges)
    for j in range(1, m + 1):
        e = G.edges[j - 1]
        hit = delta_graph(i, subgraph(G, (e,)))
        if hit is None:
            continue
        for eps in (1, -1):
            expr = i_contraction(contraction(f, G, e, "a"), i, "b", eps)
            ch = ch + single(half * (-1) ** (j + 1), expr,
                             [("s", "a"), ("s", "b")], hit[0])
    for j in range(1, m + 1):
        for k in range(j + 1, m + 1):
            ej, ek = G.edges[j - 1], G.edges[k - 1]
            hit = delta_graph(i, subgraph(G, (ej, ek)))
            if hit is None:
                continue
            for eps in (1, -1):
                expr = i_contraction(ee_contraction(f, G, ej, ek, "a", "b"),
                                     i, "c", eps)
                ch = ch + single(half * (-1) ** (j + k + 1), expr,
                                 [("s", "a"), ("s", "b"), ("s", "c")], hit[0])
    return ch


# ---------------------------------------------------------------------------
# three-term relation at arity 4 (direction-averaged contractions)


def chain_cprime(G):
    """c'(G) = f(w_0) + sum_j (-1)^j f_j^{+-}(w_1), the edge
    contractions averaged over both push directions."""
    f = f_graph(G)
    half = Fraction(1, 2)
    ch = single(1, f, [], G)
    for j, e in enumerate(G.edges, 1):
        for d in (1, -1):
            ch = ch + single(half * (-1) ** j, contraction(f, G, e, "a", d),
                             [("s", "a")], subgraph(G, (e,)))
    return ch


def chain_cprime_pair(G, H, i):
    """Two-graph chain in the direction-averaged setting."""
    f, fp, dG, dH, edges, psi = pair_data(G, H, i)
    half = Fraction(1, 2)
    ch = single(1, psi, [("t", "t")], dG)
    for j, (e, ebar, eh) in enumerate(edges, 1):
        sign = half * (-1) ** (j + 1)
        label = subgraph(dG, (ebar,))
        w = [("s", "a"), ("t", "t")]
        for d in (1, -1):
            lam = straight(contraction(f, G, e, "a", d),
                           contraction(f, dG, ebar, "a", d), "t")
            lamp = straight(contraction(fp, H, eh, "a", d),
                            contraction(fp, dH, ebar, "a", d), "t")
            psij = contraction(psi, dG, ebar, "a", d)
            ch = ch + single(sign, psij, w, label) \
                + single(sign, lam, w, label) + single(-sign, lamp, w, label)
    return ch


def chain_triple(G5, G6, G7, i):
    """Three-graph chain over the triangle graph that contains the
    three merged graphs as its two-edge subgraphs."""
    f5, f6, f7 = f_graph(G5), f_graph(G6), f_graph(G7)
    d5, d6, d7 = (merged_graph(i, G) for G in (G5, G6, G7))
    tri = PGraph(d5.partition, tuple(sorted(set(d5.edges + d6.edges + d7.edges))))
    if len(tri.edges) != 3:
        raise ValueError("merged graphs do not assemble a triangle")
    half = Fraction(1, 2)
    psi = straight(f5, homotopy_target(f5, f6, i), "t")
    phi = straight(f5, homotopy_target(f5, f7, i), "t")
    ch = single(1, f5, [], tri)
    ch = ch + single(1, psi, [("t", "t")], d6) + single(1, phi, [("t", "t")], d7)
    w = [("s", "a"), ("t", "t")]
    for hom, dG in ((psi, d6), (phi, d7)):
        for j, ebar in enumerate(dG.edges, 1):
            label = subgraph(dG, (ebar,))
            for d in (1, -1):
                ch = ch + single(half * (-1) ** (j + 1),
                                 contraction(hom, dG, ebar, "a", d), w, label)
    for sgn, fk, G, dG in ((1, f5, G5, d5), (-1, f6, G6, d6), (-1, f7, G7, d7)):
        for j, e in enumerate(G.edges, 1):
            ebar = merged_edge(i, G, e)
            label = subgraph(dG, (ebar,))
            for d in (1, -1):
                lam = straight(contraction(fk, G, e, "a", d),
                               contraction(fk, dG, ebar, "a", d), "t")
                ch = ch + single(sgn * half * (-1) ** (j + 1), lam, w, label)
    return ch


# ---------------------------------------------------------------------------
# case interpreter


def _load_cases(path=None):
    path = path or os.path.join(os.path.dirname(__file__), "data", "cases.json")
    with open(path) as fh:
        return json.load(fh)


def _graphs(spec):
    return [parse_graph(t, spec["n"]) for t in spec["graphs"]]


def _check(report, name, ok, detail=None):
    report["checks"].append({"name": name, "pass": bool(ok),
                             "detail": detail if not ok else None})


def _residual_zero(diff, facts, char):
    """A difference of chains is accepted as zero when every term that
    survives modulo char is a recorded basepoint collapse."""
    kept, rep = apply_facts(diff.reduce(char), facts)
    return kept.reduce(char).is_zero(), kept.diff_report(Chain(), char)


def run_case(name, facts=None):
    """Run one ledger case; returns a report dict with per-check
    pass/fail entries and an overall flag."""
    facts = facts or ZeroFacts.load()
    spec = _load_cases()[name]
    report = {"case": name, "checks": []}
    kind, char = spec["kind"], spec["char"]
    conv = "char%d" % char
    graphs = _graphs(spec)

    if kind == "cycles":
        maker = chain_c_ch2 if char == 2 else chain_c_ch3
        for G, text in zip(graphs, spec["graphs"]):
            ch = maker(G)
            ok = boundary_D(ch, conv).reduce(char).is_zero()
            _check(report, "D c(%s) = 0" % text, ok)
        for (gtext, i) in spec.get("corrections", []):
            G = parse_graph(gtext, spec["n"])
            ch = chain_cycle_ch3(G, i)
            ok, detail = _residual_zero(boundary_D(ch, conv), facts, char)
            _check(report, "D c(%s,%d) = 0" % (gtext, i), ok, detail)

    elif kind == "bounding":
        maker_pair = chain_pair_ch2 if char == 2 else chain_pair_ch3
        maker_c = chain_c_ch2 if char == 2 else chain_c_ch3
        total = Chain()
        for (gt, ht, i, sg, sh, w) in spec["pairs"]:
            G, H = parse_graph(gt, spec["n"]), parse_graph(ht, spec["n"])
            pair = maker_pair(G, H, i)
            total = total + pair.scale(w)
            rhs = apply_delta(maker_c(G), i, use_syntactic=False)[0].scale(sg) \
                + apply_delta(maker_c(H), i, use_syntactic=False)[0].scale(sh)
            diff = boundary_D(pair, conv) - rhs
            ok, detail = _residual_zero(diff, facts, char)
            _check(report, "D c(%s,%s,%d) matches merges" % (gt, ht, i), ok, detail)
        for (gtext, i, w) in spec.get("corrections", []):
            total = total + chain_cycle_ch3(parse_graph(gtext, spec["n"]), i).scale(w)
        target = Chain()
        for G, w in zip(graphs, spec["assembly"]):
            target = target + (chain_c_ch2 if char == 2 else chain_c_ch3)(G).scale(w)
        rhs = apply_delta(target, facts=facts)[0].scale(spec["assembly_sign"])
        ok, detail = _residual_zero(boundary_D(total, conv) - rhs, facts, char)
        _check(report, "D of the assembled chain is the merge image", ok, detail)

    elif kind == "survivors":
        total = Chain()
        for (gt, ht, i, w) in spec["pairs"]:
            G, H = parse_graph(gt, spec["n"]), parse_graph(ht, spec["n"])
            total = total + chain_pair_ch2(G, H, i).scale(w)
        survivors, rep = apply_delta(total, facts=facts)
        survivors = survivors.reduce(char)
        got = sorted((t.expr.text(), str(t.label)) for _, t in survivors.items())
        want = sorted((e, l) for (e, l) in spec["expected"])
        _check(report, "merge image is the expected fundamental cycle",
               got == want, {"got": got, "want": want})
        report["survivors"] = got

    elif kind == "three-term":
        G5, G6, G7 = graphs
        cs = [chain_cprime(G) for G in graphs]
        total = Chain()
        for ch, w in zip(cs, spec["assembly"]):
            total = total + ch.scale(w)
        for G, text in zip(graphs, spec["graphs"]):
            ok = boundary_D(chain_cprime(G), conv).reduce(char).is_zero()
            _check(report, "D c'(%s) = 0" % text, ok)
        gamma = Chain()
        for (gt, ht, i, sg, sh, w) in spec["pairs"]:
            G, H = parse_graph(gt, spec["n"]), parse_graph(ht, spec["n"])
            pair = chain_cprime_pair(G, H, i)
            gamma = gamma + pair.scale(w)
            rhs = apply_delta(chain_cprime(G), i, use_syntactic=False)[0].scale(sg) \
                + apply_delta(chain_cprime(H), i, use_syntactic=False)[0].scale(sh)
            ok, detail = _residual_zero(boundary_D(pair, conv) - rhs, facts, char)
            _check(report, "D c'(%s,%s,%d) matches merges" % (gt, ht, i), ok, detail)
        ti = spec["triple"]
        triple = chain_triple(G5, G6, G7, ti)
        gamma = gamma + triple.scale(spec["triple_weight"])
        rhs = apply_delta(total, ti, facts=facts)[0]
        ok, detail = _residual_zero(boundary_D(triple, conv) - rhs, facts, char)
        _check(report, "D of the triple chain matches merge %d" % ti, ok, detail)
        rhs = apply_delta(total, facts=facts)[0].scale(spec["assembly_sign"])
        ok, detail = _residual_zero(boundary_D(gamma, conv) - rhs, facts, char)
        _check(report, "D of the relation chain bounds the merge image", ok, detail)

    else:
        raise ValueError("unknown case kind %r" % kind)

    report["pass"] = all(c["pass"] for c in report["checks"])
    return report


def all_cases():
    return sorted(_load_cases())
