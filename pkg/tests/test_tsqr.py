"""Tests for chunked TSQR and SVD"""

import numpy as np
import pytest

from tsrom.core.executor import ChunkExecutor
from tsrom.core.tsqr import (
    QChunk,
    RFactor,
    chunk_qr,
    combine_r,
    fix_signs,
    reconstruct_u,
    small_svd,
    tssvd,
)
from tsrom.errors import (
    DimensionMismatchError,
    NonFiniteError,
    TagCollisionError,
    TagMismatchError,
)
from tsrom.storage import ChunkedMatrix, FactorRepository, MatrixChunk, SnapshotMatrix


def random_boundaries(rng, m_rows, n_chunks):
    if n_chunks == 1:
        return []
    return sorted(int(b) for b in rng.choice(np.arange(1, m_rows), size=n_chunks - 1, replace=False))


def dense_oracle(dense):
    u, sigma, vt = np.linalg.svd(dense, full_matrices=False)
    u, v = fix_signs(u, vt.T)
    return u, sigma, v


class TestOracleEquivalence:
    """TSSVD against a dense SVD on random tall matrices"""

    def test_random_matrices(self):
        """Singular values, reconstruction and orthogonality"""
        rng = np.random.default_rng(2024)

        for _ in range(20):
            n = int(rng.integers(1, 13))
            n_chunks = int(rng.integers(1, 8))
            m = int(rng.integers(max(n, n_chunks), 4097))
            dense = rng.standard_normal((m, n))
            matrix = ChunkedMatrix.from_dense(dense, boundaries=random_boundaries(rng, m, n_chunks))

            factors = tssvd(matrix)
            u = factors.u.to_dense()
            _, sigma_ref, _ = dense_oracle(dense)

            assert np.all(np.abs(factors.sigma - sigma_ref) <= 1e-10 * sigma_ref[0])
            residual = dense - (u * factors.sigma) @ factors.v.T
            assert np.linalg.norm(residual) <= 1e-12 * np.linalg.norm(dense)
            assert np.max(np.abs(u.T @ u - np.eye(n))) <= 1e-12

    def test_right_vectors_match_oracle(self):
        """Sign-fixed V agrees with the dense SVD"""
        dense = np.random.default_rng(8).standard_normal((300, 6))

        factors = tssvd(ChunkedMatrix.from_dense(dense, boundaries=[40, 41, 200]))
        u_ref, _, v_ref = dense_oracle(dense)

        np.testing.assert_allclose(factors.v, v_ref, rtol=0, atol=1e-10)
        np.testing.assert_allclose(factors.u.to_dense(), u_ref, rtol=0, atol=1e-10)

    def test_sigma_descending(self):
        """Singular values are sorted descending and nonnegative"""
        dense = np.random.default_rng(1).standard_normal((50, 7))

        sigma = tssvd(ChunkedMatrix.from_dense(dense, chunk_rows=9)).sigma

        assert np.all(np.diff(sigma) <= 0)
        assert sigma[-1] >= 0

    def test_rank_one(self):
        """A rank-one matrix has one nonzero singular value"""
        x = np.linspace(0.0, 1.0, 40)
        dense = np.outer(np.sin(3 * x) + 2.0, [1.0, 2.0, 3.0, 4.0])

        sigma = tssvd(ChunkedMatrix.from_dense(dense, chunk_rows=7)).sigma

        assert sigma[0] > 0
        assert np.all(sigma[1:] <= 1e-12 * sigma[0])

    def test_short_chunks(self):
        """Chunks with fewer rows than columns are padded"""
        dense = np.random.default_rng(4).standard_normal((20, 6))

        factors = tssvd(ChunkedMatrix.from_dense(dense, boundaries=[2, 3, 15]))
        u = factors.u.to_dense()

        np.testing.assert_allclose((u * factors.sigma) @ factors.v.T, dense, rtol=0, atol=1e-12)

    def test_energy(self):
        """Cumulative energy ends at one"""
        dense = np.random.default_rng(9).standard_normal((30, 4))

        energy = tssvd(ChunkedMatrix.from_dense(dense)).energy()

        assert np.all(np.diff(energy) >= 0)
        assert energy[-1] == pytest.approx(1.0)


class TestPartitionInvariance:
    """Chunking and scheduling do not change sigma or V"""

    def setup_method(self):
        """Set up one random matrix"""
        self.dense = np.random.default_rng(17).standard_normal((210, 8))

    def test_chunkings(self):
        """Test 1, 2, 3 and 7 chunks"""
        reference = tssvd(ChunkedMatrix.from_dense(self.dense))

        for n_chunks in (2, 3, 7):
            rows = -(-210 // n_chunks)
            factors = tssvd(ChunkedMatrix.from_dense(self.dense, chunk_rows=rows))
            np.testing.assert_allclose(factors.sigma, reference.sigma, rtol=1e-10, atol=0)
            np.testing.assert_allclose(factors.v, reference.v, rtol=0, atol=1e-10)

    def test_permuted_schedules(self):
        """Submission order and worker count leave results bit-identical"""
        matrix = ChunkedMatrix.from_dense(self.dense, chunk_rows=30)

        forward = tssvd(matrix, executor=ChunkExecutor(threads=4), order=list(range(7)))
        backward = tssvd(matrix, executor=ChunkExecutor(threads=4), order=[6, 5, 4, 3, 2, 1, 0])
        serial = tssvd(matrix)

        for factors in (backward, serial):
            assert np.array_equal(factors.sigma, forward.sigma)
            assert np.array_equal(factors.v, forward.v)
            assert np.array_equal(factors.u.to_dense(), forward.u.to_dense())


class TestStages:
    """Test suite for the individual TSQR stages"""

    def test_chunk_qr(self):
        """Q R reproduces the chunk with a nonnegative diagonal"""
        rows = np.random.default_rng(2).standard_normal((9, 4))

        q_chunk, r_factor = chunk_qr(MatrixChunk("chunk-000003", np.arange(9), rows))

        assert q_chunk.chunk_tag == r_factor.tag == "chunk-000003"
        assert np.all(np.diag(r_factor.r) >= 0)
        np.testing.assert_allclose(q_chunk.q @ r_factor.r, rows, rtol=0, atol=1e-13)

    def test_non_finite_chunk(self):
        """Test NaN in a chunk"""
        rows = np.ones((3, 2))
        rows[1, 1] = np.nan

        with pytest.raises(NonFiniteError):
            chunk_qr(MatrixChunk("chunk-000000", [0, 1, 2], rows))

    def test_r_factor_must_be_upper_triangular(self):
        """Test entries below the diagonal"""
        with pytest.raises(ValueError):
            RFactor("chunk-000000", [[1.0, 0.0], [1.0, 1.0]])

    def test_combine_r_tag_collision(self):
        """Test duplicate tags in the reduce stage"""
        r = RFactor("chunk-000000", np.eye(2))

        with pytest.raises(TagCollisionError):
            combine_r([r, RFactor("chunk-000000", np.eye(2))])

    def test_combine_r_sorts_by_tag(self):
        """Input order does not matter"""
        rng = np.random.default_rng(12)
        factors = [RFactor(f"chunk-00000{i}", np.triu(rng.standard_normal((3, 3)))) for i in range(3)]

        r_a, blocks_a = combine_r(factors)
        r_b, blocks_b = combine_r(factors[::-1])

        assert np.array_equal(r_a.r, r_b.r)
        assert [tag for tag, _ in blocks_a] == ["chunk-000000", "chunk-000001", "chunk-000002"]
        assert [tag for tag, _ in blocks_b] == [tag for tag, _ in blocks_a]

    def test_reconstruct_u_tag_mismatch(self):
        """Test a second-stage block routed to the wrong chunk"""
        q_chunk = QChunk("chunk-000000", [0, 1], np.eye(2))

        with pytest.raises(TagMismatchError):
            reconstruct_u(q_chunk, ("chunk-000001", np.eye(2)), np.eye(2))

    def test_small_svd(self):
        """Test SVD of a diagonal R"""
        u_r, sigma, v = small_svd(RFactor("global", np.diag([1.0, 3.0])))

        np.testing.assert_allclose(sigma, [3.0, 1.0])
        assert np.all(np.max(np.abs(v), axis=0) == np.max(v, axis=0))

    def test_fix_signs_ties_use_lowest_index(self):
        """Equal magnitudes: the first entry decides"""
        u = np.ones((2, 1))

        _, v_kept = fix_signs(u, np.array([[0.5], [-0.5]]))
        u_flipped, v_flipped = fix_signs(u, np.array([[-0.5], [0.5]]))

        assert np.array_equal(v_kept, [[0.5], [-0.5]])
        assert np.array_equal(v_flipped, [[0.5], [-0.5]])
        assert np.array_equal(u_flipped, -np.ones((2, 1)))

    def test_wide_matrix(self):
        """Test M < N"""
        with pytest.raises(DimensionMismatchError):
            tssvd(ChunkedMatrix.from_dense(np.ones((2, 3))))


class TestPersistence:
    """Test suite for spilled and stored factors"""

    def setup_method(self):
        """Set up a snapshot matrix"""
        self.dense = np.random.default_rng(21).standard_normal((40, 5))
        grid = np.linspace(0, 1, 5)
        self.matrix = SnapshotMatrix.from_dense(self.dense, chunk_rows=11, parameter_grid=grid)

    def test_spill_dir(self, tmp_path):
        """Spilled Q and U chunks are referenced by path only"""
        in_memory = tssvd(self.matrix)
        spilled = tssvd(self.matrix, spill_dir=tmp_path)

        assert all(ref.chunk is None for ref in spilled.u.chunks)
        assert len(list((tmp_path / "q").glob("*.tsmx"))) == 4
        assert len(list((tmp_path / "u").glob("*.tsmx"))) == 4
        assert np.array_equal(spilled.u.to_dense(), in_memory.u.to_dense())
        assert np.array_equal(spilled.sigma, in_memory.sigma)

    def test_grid_is_carried(self):
        """The snapshot grid becomes the factor grid"""
        factors = tssvd(self.matrix)

        assert np.array_equal(factors.parameter_grid, np.linspace(0, 1, 5))

    def test_factor_repository(self, tmp_path):
        """Saved factors load back exactly"""
        factors = tssvd(self.matrix)
        repository = FactorRepository(tmp_path)
        repository.save(factors, interpolant_kind="pchip", tau_bar=2.5)

        loaded = repository.load()
        manifest = repository.manifest()

        assert np.array_equal(loaded.sigma, factors.sigma)
        assert np.array_equal(loaded.v, factors.v)
        assert np.array_equal(loaded.u.to_dense(), factors.u.to_dense())
        assert manifest.interpolant_kind == "pchip"
        assert manifest.tau_bar == 2.5
