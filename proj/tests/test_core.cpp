#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "npclust/core.hpp"

using namespace npclust;

namespace {

Matrix make(int rows, int cols, std::initializer_list<double> vals) {
  Matrix m(rows, cols);
  int i = 0;
  for (double v : vals) m(i / cols, i % cols) = v, ++i;
  return m;
}

}  // namespace

TEST_CASE("matrix storage is row major with working accessors") {
  Matrix m = make(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m(0, 0) == 1);
  CHECK(m(1, 2) == 6);
  auto row = m.row(1);
  CHECK(row.size() == 3);
  CHECK(row[0] == 4);
  m(1, 0) = -1;
  CHECK(m.row(1)[0] == -1);
}

TEST_CASE("matrix equality and finiteness") {
  Matrix a = make(2, 2, {1, 2, 3, 4});
  Matrix b = make(2, 2, {1, 2, 3, 4});
  CHECK(a == b);
  b(0, 1) = 9;
  CHECK_FALSE(a == b);
  CHECK(a.all_finite());
  b(0, 1) = std::nan("");
  CHECK_FALSE(b.all_finite());
}

TEST_CASE("frobenius norm") {
  Matrix m = make(2, 2, {3, 0, 4, 0});
  CHECK(m.frobenius_norm() == doctest::Approx(5.0));
}

TEST_CASE("dot and matvec") {
  Matrix m = make(2, 2, {1, 2, 3, 4});
  std::vector<double> v{1, -1};
  CHECK(dot(m.row(0), std::span<const double>(v)) == doctest::Approx(-1.0));
  std::vector<double> out = matvec(m, std::span<const double>(v));
  CHECK(out[0] == doctest::Approx(-1.0));
  CHECK(out[1] == doctest::Approx(-1.0));
}

TEST_CASE("point set validates its data") {
  CHECK_THROWS(PointSet(Matrix(0, 2)));
  Matrix bad = make(1, 2, {1.0, std::numeric_limits<double>::infinity()});
  CHECK_THROWS(PointSet(std::move(bad)));
  PointSet ok(make(2, 2, {0, 0, 1, 1}));
  CHECK(ok.n() == 2);
  CHECK(ok.dim() == 2);
  CHECK(ok.point(1)[0] == 1);
}

TEST_CASE("symmetric matrix rejects asymmetry") {
  CHECK_THROWS(SymmetricMatrix(make(2, 2, {1, 2, 3, 4})));
  CHECK_THROWS(SymmetricMatrix(Matrix(2, 3)));
  SymmetricMatrix s(make(2, 2, {1, 2, 2, 4}));
  CHECK(s.n() == 2);
}

TEST_CASE("squared distance") {
  std::vector<double> a{0, 0}, b{3, 4};
  CHECK(sq_dist(std::span<const double>(a), std::span<const double>(b)) == doctest::Approx(25.0));
  CHECK(sq_dist(std::span<const double>(a), std::span<const double>(a)) == 0.0);
}

TEST_CASE("mean of all points and of a member subset") {
  PointSet pts(make(3, 2, {0, 0, 2, 2, 10, 0}));
  std::vector<double> whole = mean_of(pts);
  CHECK(whole[0] == doctest::Approx(4.0));
  CHECK(whole[1] == doctest::Approx(2.0 / 3));
  std::vector<int> members{0, 1};
  std::vector<double> part = mean_of(pts, members);
  CHECK(part[0] == doctest::Approx(1.0));
  CHECK(part[1] == doctest::Approx(1.0));
  std::vector<int> empty;
  CHECK_THROWS(mean_of(pts, empty));
  std::vector<int> oob{5};
  CHECK_THROWS(mean_of(pts, oob));
}

TEST_CASE("select rows copies the chosen points") {
  PointSet pts(make(3, 1, {5, 6, 7}));
  std::vector<int> rows{2, 0};
  PointSet sel = select_rows(pts, rows);
  CHECK(sel.n() == 2);
  CHECK(sel.point(0)[0] == 7);
  CHECK(sel.point(1)[0] == 5);
}

TEST_CASE("rng streams are reproducible and seed sensitive") {
  Rng a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 200; ++i) {
    const double ua = a.uniform();
    all_equal = all_equal && ua == b.uniform();
    any_diff = any_diff || ua != c.uniform();
    CHECK(ua >= 0.0);
    CHECK(ua < 1.0);
  }
  CHECK(all_equal);
  CHECK(any_diff);

  Rng d(7), e(7);
  for (int i = 0; i < 100; ++i) CHECK(d.normal() == e.normal());
  for (int i = 0; i < 100; ++i) CHECK(d.gamma(2.5, 1.5) == e.gamma(2.5, 1.5));
}

TEST_CASE("uniform_int stays in range and covers it") {
  Rng rng(1);
  std::set<int> seen;
  for (int i = 0; i < 500; ++i) {
    const int v = rng.uniform_int(5);
    CHECK(v >= 0);
    CHECK(v < 5);
    seen.insert(v);
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("normal and gamma match their moments") {
  Rng rng(123);
  const int n = 60000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal();
    sum += v;
    sq += v * v;
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(0.02));
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.02));

  // Gamma(shape 3, rate 2): mean 1.5, variance 0.75.
  sum = sq = 0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.gamma(3.0, 2.0);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  CHECK(mean == doctest::Approx(1.5).epsilon(0.02));
  CHECK(sq / n - mean * mean == doctest::Approx(0.75).epsilon(0.05));

  // Shape below one exercises the boosting branch.
  sum = 0;
  for (int i = 0; i < n; ++i) sum += rng.gamma(0.4, 1.0);
  CHECK(sum / n == doctest::Approx(0.4).epsilon(0.05));
}

TEST_CASE("beta stays in the unit interval with the right mean") {
  Rng rng(9);
  double sum = 0;
  const int n = 30000;
  for (int i = 0; i < n; ++i) {
    const double v = rng.beta(2.0, 3.0);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    sum += v;
  }
  CHECK(sum / n == doctest::Approx(0.4).epsilon(0.03));
}

TEST_CASE("shuffle is a permutation and is seed deterministic") {
  std::vector<int> v(20);
  std::iota(v.begin(), v.end(), 0);
  Rng rng(5);
  rng.shuffle(v);
  std::vector<int> w = v;
  std::sort(w.begin(), w.end());
  for (int i = 0; i < 20; ++i) CHECK(w[i] == i);

  std::vector<int> u(20);
  std::iota(u.begin(), u.end(), 0);
  Rng rng2(5);
  rng2.shuffle(u);
  CHECK(u == v);
}

TEST_CASE("eigendecomposition of a 2x2") {
  SymmetricMatrix a(make(2, 2, {2, 1, 1, 2}));
  EigenDecomposition e = sym_eig(a);
  REQUIRE(e.eigenvalues.size() == 2);
  CHECK(e.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(e.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
  // Leading eigenvector is (1,1)/sqrt(2) up to sign.
  const double r = e.eigenvectors(0, 0) / e.eigenvectors(1, 0);
  CHECK(r == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("eigendecomposition of a diagonal matrix sorts descending") {
  SymmetricMatrix a(make(3, 3, {1, 0, 0, 0, 5, 0, 0, 0, 3}));
  EigenDecomposition e = sym_eig(a);
  CHECK(e.eigenvalues[0] == doctest::Approx(5.0));
  CHECK(e.eigenvalues[1] == doctest::Approx(3.0));
  CHECK(e.eigenvalues[2] == doctest::Approx(1.0));
}

TEST_CASE("eigendecomposition reconstructs random symmetric matrices") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + rng.uniform_int(7);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        const double v = rng.uniform(-2.0, 2.0);
        m(i, j) = v;
        m(j, i) = v;
      }
    SymmetricMatrix a(m);
    EigenDecomposition e = sym_eig(a);

    // Descending eigenvalues.
    for (std::size_t i = 1; i < e.eigenvalues.size(); ++i)
      CHECK(e.eigenvalues[i - 1] >= e.eigenvalues[i]);

    // Orthonormal columns.
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        double acc = 0;
        for (int r = 0; r < n; ++r) acc += e.eigenvectors(r, p) * e.eigenvectors(r, q);
        CHECK(acc == doctest::Approx(p == q ? 1.0 : 0.0).epsilon(1e-9));
      }

    // A == V diag(w) V^T.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0;
        for (int r = 0; r < n; ++r)
          acc += e.eigenvectors(i, r) * e.eigenvalues[r] * e.eigenvectors(j, r);
        CHECK(acc == doctest::Approx(m(i, j)).epsilon(1e-9));
      }
  }
}

TEST_CASE("eigenvalue sum and product match trace and determinant on a fixture") {
  // det([[4,1,0],[1,3,1],[0,1,2]]) = 4*(6-1) - 1*(2-0) = 18, trace = 9.
  SymmetricMatrix a(make(3, 3, {4, 1, 0, 1, 3, 1, 0, 1, 2}));
  EigenDecomposition e = sym_eig(a);
  const double sum = e.eigenvalues[0] + e.eigenvalues[1] + e.eigenvalues[2];
  const double prod = e.eigenvalues[0] * e.eigenvalues[1] * e.eigenvalues[2];
  CHECK(sum == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(prod == doctest::Approx(18.0).epsilon(1e-10));
}
