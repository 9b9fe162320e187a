import json
import random

import pytest

from icecluster.errors import GuardError
from icecluster.quiver import (Arrow, IceQuiver, quiver_equal_up_to_labels)


def test_e1_is_valid(e1):
    assert e1.validate() == []


def test_frozen_arrow_needs_frozen_endpoints():
    q = IceQuiver(
        [1, 2, 3], [3],
        [Arrow("a", 2, 1), Arrow("b", 3, 2, frozen=True), Arrow("c", 1, 3)])
    diags = q.validate()
    assert len(diags) == 1
    assert "b" in diags[0]


def test_empty_quiver_is_valid():
    assert IceQuiver([], [], []).validate() == []


def test_validate_is_pure(e1):
    assert e1.validate() == e1.validate()


def test_exchange_matrix_e1(e1):
    b = e1.exchange_matrix()
    assert b.column(1) == (0, 1, -1)


def test_exchange_matrix_no_arrows():
    q = IceQuiver([1, 2], [], [])
    assert q.exchange_matrix().rows == ((0, 0), (0, 0))


def test_exchange_matrix_a2():
    # direct count with b_ij = #(i->j) - #(j->i), as for the E1 column
    q = IceQuiver([1, 2], [], [Arrow("a", 1, 2)])
    b = q.exchange_matrix()
    assert b.rows == ((0, 1), (-1, 0))
    assert b.is_antisymmetric_top_block()


def test_frozen_frozen_arrows_excluded():
    q = IceQuiver([1, 2, 3], [2, 3],
                  [Arrow("a", 1, 2), Arrow("f", 2, 3, frozen=True)])
    b = q.exchange_matrix()
    assert b.column(1) == (0, -1, 0)


def test_iso_identity(e1):
    assert quiver_equal_up_to_labels(e1, e1) == {1: 1, 2: 2, 3: 3}


def test_iso_vertex_swap(e1):
    swapped = IceQuiver(
        [1, 2, 3], [2, 3],
        [Arrow("a", 3, 1), Arrow("b", 2, 3, frozen=True), Arrow("c", 1, 2)])
    assert quiver_equal_up_to_labels(e1, swapped) == {1: 1, 2: 3, 3: 2}


def test_iso_respects_frozen_arrows(e1):
    # same shape but the frozen flag moved to another arrow
    other = IceQuiver(
        [1, 2, 3], [2, 3],
        [Arrow("a", 2, 1), Arrow("b", 3, 2), Arrow("c", 1, 3)])
    assert quiver_equal_up_to_labels(e1, other) is None


def test_iso_missing_arrow(e1):
    smaller = IceQuiver([1, 2, 3], [2, 3],
                        [Arrow("a", 2, 1), Arrow("c", 1, 3)])
    assert quiver_equal_up_to_labels(e1, smaller) is None


def test_iso_size_guard():
    n = 11
    q = IceQuiver(range(1, n + 1), [], [])
    with pytest.raises(GuardError):
        quiver_equal_up_to_labels(q, q)


def test_json_roundtrip_bit_exact(e1):
    blob = e1.to_json_string()
    again = IceQuiver.from_json(json.loads(blob))
    assert again.to_json_string() == blob


def test_json_renumbering_records_labels():
    data = {
        "vertices": [{"id": 5, "frozen": True}, {"id": 9, "frozen": False}],
        "arrows": [{"id": "a", "src": 9, "tgt": 5, "frozen": False}],
    }
    q = IceQuiver.from_json(data)
    assert q.vertices == (1, 2)
    assert q.frozen_vertices == {2}
    assert q.original_labels == {1: 9, 2: 5}
    assert q.arrows[0].src == 1 and q.arrows[0].tgt == 2


def fz_matrix_mutation(rows, k_index):
    """Standard matrix mutation, written out independently as the oracle."""
    n = len(rows)
    r = len(rows[0])
    out = [[0] * r for _ in range(n)]
    for i in range(n):
        for j in range(r):
            if i == k_index or j == k_index:
                out[i][j] = -rows[i][j]
            else:
                bik = rows[i][k_index]
                bkj = rows[k_index][j]
                out[i][j] = rows[i][j] + (abs(bik) * bkj + bik * abs(bkj)) // 2
    return out


def random_two_cycle_free_quiver(rng, n, max_mult=2):
    vertices = list(range(1, n + 1))
    frozen = [v for v in vertices if rng.random() < 0.4]
    if len(frozen) == n:
        frozen = frozen[:-1]
    arrows = []
    counter = 0
    for i in vertices:
        for j in vertices:
            if i >= j:
                continue
            direction = rng.choice([None, (i, j), (j, i)])
            if direction is None:
                continue
            for _ in range(rng.randint(1, max_mult)):
                counter += 1
                src, tgt = direction
                is_frozen = src in frozen and tgt in frozen and rng.random() < 0.5
                arrows.append(Arrow("a%d" % counter, src, tgt, frozen=is_frozen))
    return IceQuiver(vertices, frozen, arrows).renumbered()


def test_mutation_matrix_shadow_randomized():
    from icecluster.seeds import mutate_ice_quiver
    rng = random.Random(20240)
    checked = 0
    for _ in range(60):
        q = random_two_cycle_free_quiver(rng, rng.randint(2, 6))
        unfrozen = q.unfrozen_vertices
        if not unfrozen:
            continue
        k = rng.choice(unfrozen)
        before = q.exchange_matrix()
        mutated = mutate_ice_quiver(q, k)
        after = mutated.exchange_matrix()
        k_index = before.unfrozen_order.index(k)
        expected = fz_matrix_mutation([list(r) for r in before.rows], k_index)
        assert [list(r) for r in after.rows] == expected
        checked += 1
    assert checked >= 40
