import itertools

from hypothesis import given, settings, strategies as st

from padic_kirillov import PkMatrix, howell_form
from padic_kirillov.linalg import left_kernel, solve_left

SMALL = st.sampled_from([(2, 2), (3, 1), (3, 2), (5, 1)])


def _span(rows, p, k):
    q = p**k
    n = len(rows[0])
    out = set()
    for cs in itertools.product(range(q), repeat=len(rows)):
        out.add(tuple(sum(c * r[i] for c, r in zip(cs, rows)) % q for i in range(n)))
    return out


@settings(max_examples=40, deadline=None)
@given(SMALL, st.data())
def test_howell_membership_matches_enumeration(pk, data):
    p, k = pk
    q = p**k
    rows = data.draw(st.lists(st.lists(st.integers(0, q - 1), min_size=2, max_size=2), min_size=1, max_size=3))
    H = howell_form(rows, p, k)
    span = _span(rows, p, k)
    for v in itertools.product(range(q), repeat=2):
        assert H.contains(v) == (v in span)
    assert p**H.length == len(span)


@settings(max_examples=40, deadline=None)
@given(SMALL, st.data())
def test_howell_form_is_canonical(pk, data):
    p, k = pk
    q = p**k
    rows = data.draw(st.lists(st.lists(st.integers(0, q - 1), min_size=3, max_size=3), min_size=1, max_size=3))
    mixed = rows + [[(a + 2 * b) % q for a, b in zip(rows[0], rows[-1])]]
    assert howell_form(rows, p, k) == howell_form(list(reversed(mixed)), p, k)


@settings(max_examples=40, deadline=None)
@given(SMALL, st.data())
def test_left_kernel_and_solve(pk, data):
    p, k = pk
    q = p**k
    A = data.draw(st.lists(st.lists(st.integers(0, q - 1), min_size=2, max_size=2), min_size=2, max_size=3))
    K = left_kernel(A, p, k)
    brute = {x for x in itertools.product(range(q), repeat=len(A))
             if all(sum(xi * r[j] for xi, r in zip(x, A)) % q == 0 for j in range(2))}
    assert p**K.length == len(brute)
    assert all(K.contains(x) for x in brute)
    target = data.draw(st.lists(st.integers(0, q - 1), min_size=2, max_size=2))
    sol = solve_left(A, target, p, k)
    reachable = tuple(target) in _span(A, p, k)
    assert (sol is not None) == reachable
    if sol is not None:
        assert [sum(s * r[j] for s, r in zip(sol, A)) % q for j in range(2)] == target


def test_matrix_algebra():
    A = PkMatrix([[1, 2], [3, 4]], 5, 2)
    I = PkMatrix.identity(2, 5, 2)
    assert A @ I == A
    assert A**0 == I
    assert (A**3) == A @ A @ A
    assert (A - A) == PkMatrix.zeros(2, 5, 2)
    assert A.T().tolist() == [[1, 3], [2, 4]]
    assert PkMatrix([[5, 0], [0, 0]], 5, 2).rank() == 0
    assert I.rank() == 2


def test_free_rank_is_not_unit_pivot_count():
    H = howell_form([[3, 1]], 3, 4)
    assert H.pivots[0] == (0, 1)
    assert H.free_rank == 1 and H.is_free()
    assert howell_form([[3, 0]], 3, 4).free_rank == 0
    assert not howell_form([[3, 0]], 3, 4).is_free()


@settings(max_examples=40, deadline=None)
@given(SMALL, st.data())
def test_free_rank_matches_enumeration(pk, data):
    p, k = pk
    q = p**k
    rows = data.draw(st.lists(st.lists(st.integers(0, q - 1), min_size=2, max_size=2), min_size=1, max_size=3))
    H = howell_form(rows, p, k)
    span = _span(rows, p, k)
    top = {tuple(x * p ** (k - 1) % q for x in v) for v in span}
    assert p**H.free_rank == len(top)
    free = len(span) == len(top) ** k
    assert H.is_free() == free
    if free:
        B = H.free_basis()
        assert len(B) == H.free_rank
        assert _span(B, p, k) == span if B else span == {(0, 0)}


def test_idempotent_rank_is_trace():
    M = PkMatrix([[17, 72, 8, 32], [15, 63, 57, 60], [48, 26, 12, 62], [3, 49, 55, 77]], 3, 4)
    from padic_kirillov import ordinary_projector

    e = ordinary_projector(M)
    assert e.rank() == sum(e.tolist()[i][i] for i in range(4)) % 81 == 3
