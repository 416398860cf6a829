#include "srtd/errors.hpp"
#include "srtd/reference.hpp"
#include "srtd/t_algebra.hpp"
#include "test_support.hpp"

#include <Eigen/SVD>
#include <gtest/gtest.h>

namespace srtd {
namespace {

using testing::random_orthonormal_rows;
using testing::random_tensor;
using testing::rel_diff;

Eigen::VectorXd dc_singular_values(const Tensor3& a) {
  Matrix sum = Matrix::Zero(Eigen::Index(a.n1()), Eigen::Index(a.n2()));
  for (std::size_t k = 0; k < a.n3(); ++k) sum += a.slice(k);
  return Eigen::JacobiSVD<Matrix>(sum).singularValues();
}

double off_diagonal_max(const Tensor3& s) {
  double m = 0;
  for (std::size_t k = 0; k < s.n3(); ++k)
    for (std::size_t j = 0; j < s.n2(); ++j)
      for (std::size_t i = 0; i < s.n1(); ++i)
        if (i != j) m = std::max(m, std::abs(s(i, j, k)));
  return m;
}

TEST(Tproduct, SingleSliceIsMatrixProduct) {
  std::mt19937_64 gen(1);
  const Tensor3 a = random_tensor({3, 4, 1}, gen);
  const Tensor3 b = random_tensor({4, 2, 1}, gen);
  const Matrix expected = a.slice(0) * b.slice(0);
  EXPECT_LE((Matrix(tproduct(a, b).slice(0)) - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Tproduct, IdentityIsNeutral) {
  std::mt19937_64 gen(2);
  const Tensor3 a = random_tensor({3, 4, 2}, gen);
  EXPECT_LE(max_abs(tproduct(a, identity_tensor(4, 2)) - a), 1e-14);
  EXPECT_LE(max_abs(tproduct(identity_tensor(3, 2), a) - a), 1e-14);
}

TEST(Tproduct, MatchesBlockCirculantProduct) {
  std::mt19937_64 gen(3);
  const Tensor3 a = random_tensor({2, 3, 4}, gen);
  const Tensor3 b = random_tensor({3, 2, 4}, gen);
  const Tensor3 c = tproduct(a, b);
  EXPECT_EQ(c.dims(), (Dims{2, 2, 4}));
  EXPECT_LE(rel_diff(c, fold(bcirc(a) * unfold(b), {2, 2, 4})), 1e-10);
}

TEST(Tproduct, ParallelAndReferenceAgreeOnLargerShapes) {
  std::mt19937_64 gen(4);
  const Tensor3 a = random_tensor({40, 30, 6}, gen);
  const Tensor3 b = random_tensor({30, 20, 6}, gen);
  EXPECT_LE(rel_diff(tproduct(a, b), reference::tproduct(a, b)), 1e-12);
}

TEST(Tproduct, DimensionMismatchThrows) {
  EXPECT_THROW(tproduct(Tensor3(2, 3, 2), Tensor3(2, 3, 2)), DimensionError);
  EXPECT_THROW(tproduct(Tensor3(2, 3, 2), Tensor3(3, 3, 3)), DimensionError);
}

TEST(Tproduct, TransposeReversesOrder) {
  std::mt19937_64 gen(5);
  const Tensor3 a = random_tensor({2, 3, 5}, gen);
  const Tensor3 b = random_tensor({3, 4, 5}, gen);
  EXPECT_LE(rel_diff(ttranspose(tproduct(a, b)), tproduct(ttranspose(b), ttranspose(a))), 1e-12);
}

void expect_valid_tsvd(const Tensor3& a, const TSvdFactors& f, double tol) {
  const Tensor3 back = tproduct(tproduct(f.u, f.s), ttranspose(f.v));
  EXPECT_LE(fro_norm(back - a), tol * std::max(1.0, fro_norm(a)));
  const Tensor3 uu = tproduct(ttranspose(f.u), f.u);
  const Tensor3 vv = tproduct(ttranspose(f.v), f.v);
  EXPECT_LE(max_abs(uu - identity_tensor(uu.n1(), a.n3())), tol);
  EXPECT_LE(max_abs(vv - identity_tensor(vv.n1(), a.n3())), tol);
  EXPECT_LE(off_diagonal_max(f.s), tol * std::max(1.0, fro_norm(f.s)));
}

TEST(Tsvd, FullFactorsOfRandomTensor) {
  std::mt19937_64 gen(6);
  const Tensor3 a = random_tensor({4, 3, 5}, gen);
  const TSvdFactors f = tsvd(a);
  EXPECT_EQ(f.u.dims(), (Dims{4, 4, 5}));
  EXPECT_EQ(f.s.dims(), (Dims{4, 3, 5}));
  EXPECT_EQ(f.v.dims(), (Dims{3, 3, 5}));
  expect_valid_tsvd(a, f, 1e-9);
}

TEST(Tsvd, EconomyFactors) {
  std::mt19937_64 gen(7);
  for (Dims d : {Dims{6, 3, 4}, Dims{3, 6, 5}}) {
    const Tensor3 a = random_tensor(d, gen);
    const TSvdFactors f = tsvd(a, TsvdShape::economy);
    EXPECT_EQ(f.u.dims(), (Dims{d.n1, 3, d.n3}));
    EXPECT_EQ(f.s.dims(), (Dims{3, 3, d.n3}));
    EXPECT_EQ(f.v.dims(), (Dims{d.n2, 3, d.n3}));
    const Tensor3 back = tproduct(tproduct(f.u, f.s), ttranspose(f.v));
    EXPECT_LE(rel_diff(back, a), 1e-9);
  }
}

TEST(Tsvd, IdentityTensor) {
  const Tensor3 i = identity_tensor(3, 2);
  const TSvdFactors f = tsvd(i);
  EXPECT_LE(max_abs(f.s - i), 1e-12);
}

TEST(Tsvd, SingleSliceIsMatrixSvd) {
  std::mt19937_64 gen(8);
  const Tensor3 a = random_tensor({4, 3, 1}, gen);
  const TSvdFactors f = tsvd(a);
  const Eigen::VectorXd expected = Eigen::JacobiSVD<Matrix>(Matrix(a.slice(0))).singularValues();
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(f.s(std::size_t(i), std::size_t(i), 0), expected(i), 1e-12);
  expect_valid_tsvd(a, f, 1e-9);
}

TEST(Tsvd, RandomShapesSatisfyInvariants) {
  std::mt19937_64 gen(9);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int trial = 0; trial < 40; ++trial) {
    const Tensor3 a = random_tensor({dim(gen), dim(gen), dim(gen)}, gen);
    expect_valid_tsvd(a, tsvd(a), 1e-9);
    for (const auto& s : spectral_singular_values(a)) {
      for (Eigen::Index i = 0; i < s.size(); ++i) {
        EXPECT_GE(s(i), 0);
        if (i > 0) {
          EXPECT_LE(s(i), s(i - 1) + 1e-12);
        }
      }
    }
  }
}

TEST(TubalRank, Examples) {
  EXPECT_EQ(tubal_rank(Tensor3(3, 4, 2)), 0u);
  EXPECT_EQ(tubal_rank(identity_tensor(4, 3)), 4u);
  std::mt19937_64 gen(10);
  const Tensor3 g = tproduct(random_tensor({8, 3, 4}, gen), random_tensor({3, 8, 4}, gen));
  EXPECT_EQ(tubal_rank(g, 1e-8), 3u);
  EXPECT_THROW(tubal_rank(g, -1), ParameterError);
}

TEST(Tnn, IdentityAndZero) {
  EXPECT_NEAR(tnn(identity_tensor(3, 4)), 3, 1e-12);
  EXPECT_NEAR(tnn_from_tsvd(identity_tensor(3, 4)), 3, 1e-12);
  EXPECT_EQ(tnn(Tensor3(2, 3, 4)), 0);
}

TEST(Tnn, FastAndSlowPathsAgree) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor3 a = random_tensor({3, 4, 5}, gen);
    EXPECT_LE(rel_diff(tnn(a), tnn_from_tsvd(a)), 1e-9);
  }
}

TEST(Tnn, SpectralMeanIsScaledBcircNuclearNorm) {
  std::mt19937_64 gen(12);
  const Tensor3 a = random_tensor({3, 2, 5}, gen);
  EXPECT_LE(rel_diff(tnn_spectral_mean(a), reference::bcirc_nuclear_norm(a) / 5.0), 1e-12);
}

TEST(TracePair, Examples) {
  const Tensor3 i = identity_tensor(3, 2);
  EXPECT_NEAR(trace_pair(i, i), 3, 1e-14);
  std::mt19937_64 gen(13);
  const Tensor3 a = random_tensor({3, 4, 5}, gen);
  EXPECT_EQ(trace_pair(a, Tensor3(4, 3, 5)), 0);
  EXPECT_THROW(trace_pair(a, Tensor3(4, 2, 5)), DimensionError);
}

TEST(TracePair, MatchesTraceOfProduct) {
  std::mt19937_64 gen(14);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor3 a = random_tensor({3, 4, 5}, gen);
    const Tensor3 b = random_tensor({4, 3, 5}, gen);
    EXPECT_LE(rel_diff(trace_pair(a, b), ttrace(tproduct(a, b))), 1e-9);
  }
}

TEST(Ttnn, Examples) {
  std::mt19937_64 gen(15);
  const Tensor3 a = random_tensor({4, 4, 3}, gen);
  EXPECT_NEAR(ttnn(a, 0), tnn(a), 1e-12);
  EXPECT_NEAR(ttnn(a, 4), 0, 1e-12);
  const Eigen::VectorXd s = dc_singular_values(a);
  EXPECT_NEAR(ttnn(a, 2), s.sum() - s.head(2).sum(), 1e-10);
  EXPECT_THROW(ttnn(a, 5), ParameterError);
}

TEST(Svt, ZeroThresholdKeepsInput) {
  std::mt19937_64 gen(16);
  const Tensor3 x = random_tensor({4, 3, 5}, gen);
  EXPECT_LE(max_abs(svt(x, 0) - x), 1e-9);
}

TEST(Svt, LargeThresholdGivesZero) {
  std::mt19937_64 gen(17);
  const Tensor3 x = random_tensor({4, 3, 5}, gen);
  double largest = 0;
  for (const auto& s : spectral_singular_values(x)) largest = std::max(largest, s.maxCoeff());
  EXPECT_LE(max_abs(svt(x, largest)), 1e-9);
}

TEST(Svt, DiagonalMatrixCase) {
  Tensor3 x(2, 2, 1);
  x(0, 0, 0) = 3;
  x(1, 1, 0) = 1;
  Tensor3 expected(2, 2, 1);
  expected(0, 0, 0) = 1;
  EXPECT_LE(max_abs(svt(x, 2) - expected), 1e-12);

  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 3;
  m(1, 1) = 1;
  Matrix me = Matrix::Zero(2, 2);
  me(0, 0) = 1;
  EXPECT_LE((svt(m, 2) - me).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Svt, MatchesBlockCirculantThresholding) {
  std::mt19937_64 gen(18);
  for (std::size_t n3 : {1, 2, 3, 4, 5}) {
    const Tensor3 x = random_tensor({4, 3, n3}, gen);
    EXPECT_LE(max_abs(svt(x, 0.7) - reference::svt(x, 0.7)), 1e-10) << "n3=" << n3;
  }
}

TEST(Svt, MinimizesSpectralMeanProximalObjective) {
  std::mt19937_64 gen(19);
  for (int inst = 0; inst < 5; ++inst) {
    const Tensor3 x = random_tensor({4, 5, 3}, gen);
    const double tau = 0.5;
    const Tensor3 y = svt(x, tau);
    auto objective = [&](const Tensor3& t) {
      const double d = fro_norm(t - x);
      return tau * tnn_spectral_mean(t) + 0.5 * d * d;
    };
    const double at_y = objective(y);
    for (int p = 0; p < 50; ++p) {
      Tensor3 delta = random_tensor(x.dims(), gen);
      delta *= 1e-3 * fro_norm(x) / fro_norm(delta);
      EXPECT_LE(at_y, objective(y + delta) + 1e-12);
    }
  }
}

// With tnn() (the DC-slice nuclear norm) in place of the spectral mean the
// perturbation check fails: svt is not the proximal map of tau * tnn.
TEST(Svt, IsNotProximalForDcSliceNorm) {
  std::mt19937_64 gen(20);
  const Tensor3 x = random_tensor({4, 5, 3}, gen);
  const double tau = 0.5;
  const Tensor3 y = svt(x, tau);
  auto objective = [&](const Tensor3& t) {
    const double d = fro_norm(t - x);
    return tau * tnn(t) + 0.5 * d * d;
  };
  int improved = 0;
  for (int p = 0; p < 100; ++p) {
    Tensor3 delta = random_tensor(x.dims(), gen);
    delta *= 1e-3 * fro_norm(x) / fro_norm(delta);
    if (objective(y + delta) < objective(y)) ++improved;
  }
  EXPECT_GT(improved, 0);
}

TEST(Svt, IsNonExpansive) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 50; ++trial) {
    const Tensor3 x = random_tensor({3, 4, 4}, gen);
    const Tensor3 y = random_tensor({3, 4, 4}, gen);
    EXPECT_LE(fro_norm(svt(x, 0.8) - svt(y, 0.8)), fro_norm(x - y) + 1e-9);
  }
}

TEST(Svt, NegativeThresholdThrows) {
  EXPECT_THROW(svt(Tensor3(2, 2, 2), -1), ParameterError);
  EXPECT_THROW(svt(Matrix(Matrix::Zero(2, 2)), -1), ParameterError);
}

TEST(TraceBound, LeadingSingularVectorsAttainEquality) {
  std::mt19937_64 gen(22);
  const Matrix x = testing::random_matrix(6, 5, gen);
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  for (Eigen::Index r = 1; r <= 5; ++r) {
    const Matrix a = svd.matrixU().leftCols(r).transpose();
    const Matrix b = svd.matrixV().leftCols(r).transpose();
    EXPECT_NEAR((a * x * b.transpose()).trace(), svd.singularValues().head(r).sum(), 1e-8);
    EXPECT_TRUE(trace_bound_check(x, a, b));
  }
}

TEST(TraceBound, EmptyTruncation) {
  std::mt19937_64 gen(23);
  const Matrix x = testing::random_matrix(6, 5, gen);
  EXPECT_TRUE(trace_bound_check(x, Matrix(0, 6), Matrix(0, 5)));
}

TEST(TraceBound, RandomOrthonormalPairs) {
  std::mt19937_64 gen(24);
  const Matrix x = testing::random_matrix(6, 5, gen);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index r = 1 + trial % 5;
    EXPECT_TRUE(trace_bound_check(x, random_orthonormal_rows(r, 6, gen), random_orthonormal_rows(r, 5, gen)));
  }
}

TEST(TraceBound, RejectsNonOrthonormalRows) {
  std::mt19937_64 gen(25);
  const Matrix x = testing::random_matrix(4, 4, gen);
  const Matrix a = 2 * Matrix::Identity(2, 4);
  EXPECT_THROW(trace_bound_check(x, a, Matrix::Identity(2, 4)), ParameterError);
  EXPECT_THROW(trace_bound_check(x, Matrix::Identity(2, 3), Matrix::Identity(2, 4)), DimensionError);
}

} // namespace
} // namespace srtd
