import numpy as np
import pytest

from lattice_pdo.lattice import BoxTruncation, LatticeSpec, index_of
from lattice_pdo.kernel import (KernelMatrix, apply, assemble, hermitian_check,
                                hermitize, read_binary, split_diagonal,
                                write_binary, write_csv)
from lattice_pdo.symbols import (constant_symbol, decaying_test_symbol,
                                 difference_symbol, schrodinger_symbol,
                                 symbol_from_matrix)

SPEC1 = LatticeSpec(1.0, 1)


def schrodinger_k2(spec=SPEC1, lam=0.0):
    return schrodinger_symbol(lambda k: float(k @ k), lam, spec, potential_order=2.0)


def test_assemble_difference():
    K = assemble(difference_symbol(), SPEC1, BoxTruncation(1))
    expected = np.array([[-1, 1, 0], [0, -1, 1], [0, 0, -1]], dtype=complex)
    np.testing.assert_array_equal(K.entries, expected)


def test_assemble_identity():
    K = assemble(constant_symbol(1.0), SPEC1, BoxTruncation(2))
    np.testing.assert_array_equal(K.entries, np.eye(5))


def test_assemble_schrodinger_3x3():
    K = assemble(schrodinger_k2(), SPEC1, BoxTruncation(1))
    expected = np.array([[3, -1, 0], [-1, 2, -1], [0, -1, 3]], dtype=complex)
    np.testing.assert_array_equal(K.entries, expected)


def test_assemble_matches_basis_action():
    # oracle: apply the operator definition column by column
    K = assemble(difference_symbol(), SPEC1, BoxTruncation(2))
    box = BoxTruncation(2)
    for i in range(-1, 3):  # columns whose image stays in the box
        col = index_of(SPEC1, box, float(i))
        e = np.zeros(5)
        e[col] = 1.0
        out = apply(K, e)
        for krow in range(-2, 3):
            expected = 1.0 if krow == i - 1 else (-1.0 if krow == i else 0.0)
            assert out[index_of(SPEC1, box, float(krow))] == pytest.approx(expected)


def test_apply_examples():
    Kd = assemble(difference_symbol(), SPEC1, BoxTruncation(1))
    out = apply(Kd, np.array([0.0, 1.0, 0.0]))  # basis vector at k = 0
    np.testing.assert_allclose(out, [1.0, -1.0, 0.0])

    Ki = assemble(constant_symbol(1.0), SPEC1, BoxTruncation(1))
    v = np.array([1.0, 2.0, 3.0])
    np.testing.assert_allclose(apply(Ki, v), v)

    Ks = assemble(schrodinger_k2(), SPEC1, BoxTruncation(1))
    np.testing.assert_allclose(apply(Ks, np.ones(3)), [2.0, 0.0, 2.0])


def test_apply_length_mismatch():
    K = assemble(difference_symbol(), SPEC1, BoxTruncation(1))
    with pytest.raises(ValueError):
        apply(K, np.ones(4))


def test_split_diagonal_examples():
    Ki = assemble(constant_symbol(1.0), SPEC1, BoxTruncation(1))
    split = split_diagonal(Ki)
    np.testing.assert_array_equal(split.diagonal, np.ones(3))
    assert np.all(split.residue.entries == 0)

    Ks = assemble(schrodinger_k2(), SPEC1, BoxTruncation(1))
    split = split_diagonal(Ks)
    np.testing.assert_array_equal(split.diagonal, [3, 2, 3])
    assert np.all(np.diag(split.residue.entries) == 0)

    Kd = assemble(difference_symbol(), SPEC1, BoxTruncation(1))
    split = split_diagonal(Kd)
    np.testing.assert_array_equal(split.diagonal, [-1, -1, -1])
    # exact reassembly, bitwise on the diagonal
    total = np.array(split.residue.entries)
    total[np.arange(3), np.arange(3)] = split.diagonal
    np.testing.assert_array_equal(total, Kd.entries)


def test_hermitian_check():
    ok, asym = hermitian_check(assemble(schrodinger_k2(), SPEC1, BoxTruncation(2)))
    assert ok and asym == 0.0

    ok, _ = hermitian_check(assemble(difference_symbol(), SPEC1, BoxTruncation(2)))
    assert not ok

    Kd = assemble(decaying_test_symbol(3.0, 2.0, 1.0), SPEC1, BoxTruncation(2))
    ok, _ = hermitian_check(Kd)
    assert not ok
    ok, asym = hermitian_check(hermitize(Kd))
    assert ok and asym == 0.0


def test_roundtrip_random_kernels():
    rng = np.random.default_rng(3)
    box = BoxTruncation(2)
    for _ in range(20):
        M = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        K = KernelMatrix(SPEC1, box, M)
        K2 = assemble(symbol_from_matrix(K), SPEC1, box)
        assert np.max(np.abs(K2.entries - K.entries)) <= 1e-10


def test_kernel_rejects_nonfinite():
    M = np.eye(3, dtype=complex)
    M[0, 0] = np.nan
    with pytest.raises(ValueError):
        KernelMatrix(SPEC1, BoxTruncation(1), M)


def test_kernel_rejects_wrong_shape():
    with pytest.raises(ValueError):
        KernelMatrix(SPEC1, BoxTruncation(1), np.eye(4, dtype=complex))


def test_csv_export_difference(tmp_path):
    K = assemble(difference_symbol(), SPEC1, BoxTruncation(1))
    path = tmp_path / "k.csv"
    write_csv(K, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "row,col,re,im"
    assert len(lines) == 1 + 5  # five nonzero entries in the 3x3 kernel
    values = sorted(float(line.split(",")[2]) for line in lines[1:])
    assert values == [-1.0, -1.0, -1.0, 1.0, 1.0]


def test_binary_roundtrip(tmp_path):
    rng = np.random.default_rng(5)
    M = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    K = KernelMatrix(LatticeSpec(0.5, 1), BoxTruncation(4), M)
    path = tmp_path / "k.bin"
    write_binary(K, path)
    K2 = read_binary(path)
    assert K2.spec == K.spec
    assert K2.box == K.box
    np.testing.assert_array_equal(K2.entries, K.entries)


def test_roundtrip_2d_quadrature_path():
    rng = np.random.default_rng(9)
    spec2 = LatticeSpec(1.0, 2)
    box = BoxTruncation(1)
    M = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    K = KernelMatrix(spec2, box, M)
    K2 = assemble(symbol_from_matrix(K), spec2, box)
    assert np.max(np.abs(K2.entries - K.entries)) <= 1e-10


def test_assemble_2d_schrodinger_neighbors():
    spec = LatticeSpec(1.0, 2)
    sym = schrodinger_symbol(lambda k: float(k @ k), 0.0, spec, potential_order=2.0)
    K = assemble(sym, spec, BoxTruncation(1))
    box = BoxTruncation(1)
    c = index_of(spec, box, (0.0, 0.0))
    up = index_of(spec, box, (0.0, 1.0))
    right = index_of(spec, box, (1.0, 0.0))
    diag = index_of(spec, box, (1.0, 1.0))
    assert K.entries[c, c] == pytest.approx(4.0)       # 2n + V(0)
    assert K.entries[c, up] == pytest.approx(-1.0)
    assert K.entries[c, right] == pytest.approx(-1.0)
    assert K.entries[c, diag] == pytest.approx(0.0)    # no diagonal hopping
