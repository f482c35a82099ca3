#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "piclab/dist.hpp"
#include "piclab/errors.hpp"
#include "piclab/oracle.hpp"
#include "piclab/pic.hpp"
#include "test_util.hpp"

using namespace piclab;
using dist::Channel;
using dist::JointPmf;

namespace {

// Direct mmse(f(X)|Y) = ||f||^2 - ||E[f|Y]||^2 for centered f.
double direct_mmse(const JointPmf& j, const std::vector<double>& f) {
  double mean = 0.0;
  for (std::size_t x = 0; x < j.rows(); ++x) mean += j.p_x()[x] * f[x];
  double var = 0.0;
  for (std::size_t x = 0; x < j.rows(); ++x)
    var += j.p_x()[x] * (f[x] - mean) * (f[x] - mean);
  double cond = 0.0;
  for (std::size_t y = 0; y < j.cols(); ++y) {
    double e = 0.0;
    for (std::size_t x = 0; x < j.rows(); ++x) e += j(x, y) * (f[x] - mean);
    e /= j.p_y()[y];
    cond += j.p_y()[y] * e * e;
  }
  return var - cond;
}

double norm_e_f_given(const JointPmf& j, const std::vector<double>& f, bool given_y) {
  // ||E[f(X)|Y]||^2 (or with roles swapped when given_y is false).
  double out = 0.0;
  if (given_y) {
    for (std::size_t y = 0; y < j.cols(); ++y) {
      double e = 0.0;
      for (std::size_t x = 0; x < j.rows(); ++x) e += j(x, y) * f[x];
      e /= j.p_y()[y];
      out += j.p_y()[y] * e * e;
    }
  } else {
    for (std::size_t x = 0; x < j.rows(); ++x) {
      double e = 0.0;
      for (std::size_t y = 0; y < j.cols(); ++y) e += j(x, y) * f[y];
      e /= j.p_x()[x];
      out += j.p_x()[x] * e * e;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("decompose on canonical joints") {
  pic::PicDecomposition indep =
      pic::decompose(testutil::independent_joint({0.2, 0.3, 0.5}, {0.1, 0.2, 0.3, 0.4}));
  CHECK(indep.d == 2);
  for (double l : indep.lambdas) CHECK(l == doctest::Approx(0.0).epsilon(1e-12));

  pic::PicDecomposition ident = pic::decompose(testutil::identity_joint(3));
  CHECK(ident.lambdas[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ident.lambdas[1] == doctest::Approx(1.0).epsilon(1e-12));

  pic::PicDecomposition bsc = pic::decompose(testutil::bsc_joint(0.1));
  REQUIRE(bsc.d == 1);
  CHECK(bsc.lambdas[0] == doctest::Approx(0.64).epsilon(1e-12));
}

TEST_CASE("principal functions: constants, orthonormality, coupling, signs") {
  std::mt19937_64 rng(testutil::kMasterSeed);
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(2, 5);
    JointPmf j = testutil::random_joint(rng, dim(rng), dim(rng));
    pic::PicDecomposition dec = pic::decompose(j);

    for (std::size_t x = 0; x < j.rows(); ++x)
      CHECK(dec.f_funcs(x, 0) == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t y = 0; y < j.cols(); ++y)
      CHECK(dec.g_funcs(y, 0) == doctest::Approx(1.0).epsilon(1e-9));

    for (std::size_t a = 0; a <= dec.d; ++a)
      for (std::size_t b = a; b <= dec.d; ++b) {
        double dot_f = 0.0;
        for (std::size_t x = 0; x < j.rows(); ++x)
          dot_f += j.p_x()[x] * dec.f_funcs(x, a) * dec.f_funcs(x, b);
        CHECK(dot_f == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-8));
        double dot_g = 0.0;
        for (std::size_t y = 0; y < j.cols(); ++y)
          dot_g += j.p_y()[y] * dec.g_funcs(y, a) * dec.g_funcs(y, b);
        CHECK(dot_g == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-8));
      }

    // coupling E[f_k(X)|Y=y] = sqrt(l_k) g_k(y)
    for (std::size_t k = 1; k <= dec.d; ++k) {
      const double sk = dec.sigma_full[k];
      for (std::size_t y = 0; y < j.cols(); ++y) {
        double e = 0.0;
        for (std::size_t x = 0; x < j.rows(); ++x) e += j(x, y) * dec.f_funcs(x, k);
        e /= j.p_y()[y];
        CHECK(e == doctest::Approx(sk * dec.g_funcs(y, k)).epsilon(1e-8).scale(1.0));
      }
    }

    // sign convention: first nonzero entry of each f_k positive
    for (std::size_t k = 0; k <= dec.d; ++k) {
      for (std::size_t x = 0; x < j.rows(); ++x) {
        if (std::abs(dec.f_funcs(x, k)) > 1e-12) {
          CHECK(dec.f_funcs(x, k) > 0.0);
          break;
        }
      }
    }
  }
}

TEST_CASE("characterization equivalence against the variational oracles") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(2, 4);
    JointPmf j = testutil::random_joint(rng, dim(rng), dim(rng));
    pic::PicDecomposition dec = pic::decompose(j);
    oracle::OracleResult ace = oracle::maxcorr_by_ace(j, 4000, trial);
    CHECK(std::abs(pic::maximal_correlation(dec) - ace.value) <= 1e-6);
    oracle::OracleResult var = oracle::variational_pic(j, 1, 6, trial);
    CHECK(std::abs(dec.lambdas[0] - var.value) <= 1e-6);
  }
}

TEST_CASE("mmse characterization of the top principal function") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    JointPmf j = testutil::random_joint(rng, 4, 4);
    pic::PicDecomposition dec = pic::decompose(j);

    std::vector<double> f1(j.rows());
    for (std::size_t x = 0; x < j.rows(); ++x) f1[x] = dec.f_funcs(x, 1);
    pic::MmseReport rep = pic::mmse_of_function(j, dec, f1);
    CHECK(rep.mmse == doctest::Approx(1.0 - dec.lambdas[0]).epsilon(1e-9));

    // random centered unit-variance functions never beat 1 - lambda_1
    std::normal_distribution<double> gauss;
    for (int k = 0; k < 200; ++k) {
      std::vector<double> f(j.rows());
      for (double& v : f) v = gauss(rng);
      double mean = 0.0;
      for (std::size_t x = 0; x < j.rows(); ++x) mean += j.p_x()[x] * f[x];
      double var = 0.0;
      for (std::size_t x = 0; x < j.rows(); ++x) {
        f[x] -= mean;
        var += j.p_x()[x] * f[x] * f[x];
      }
      if (var < 1e-12) continue;
      for (double& v : f) v /= std::sqrt(var);
      CHECK(direct_mmse(j, f) >= 1.0 - dec.lambdas[0] - 1e-8);
    }
  }
}

TEST_CASE("mmse report agrees with the direct conditional expectation") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(2, 5);
    JointPmf j = testutil::random_joint(rng, dim(rng), dim(rng));
    pic::PicDecomposition dec = pic::decompose(j);
    std::normal_distribution<double> gauss;
    std::vector<double> f(j.rows());
    for (double& v : f) v = gauss(rng);
    pic::MmseReport rep;
    try {
      rep = pic::mmse_of_function(j, dec, f);
    } catch (const Error&) {
      continue;
    }
    CHECK(rep.mmse == doctest::Approx(direct_mmse(j, f)).epsilon(1e-9).scale(1.0));
    double csum = 0.0;
    for (double c : rep.coeffs) csum += c * c;
    CHECK(csum <= 1.0 + 1e-8);
    CHECK(rep.mmse >= -1e-12);
    CHECK(rep.mmse <= rep.variance + 1e-12);
  }

  JointPmf indep = testutil::independent_joint({0.5, 0.5}, {0.3, 0.7});
  pic::PicDecomposition dec = pic::decompose(indep);
  pic::MmseReport rep = pic::mmse_of_function(indep, dec, {1.0, -1.0});
  CHECK(rep.mmse == doctest::Approx(rep.variance).epsilon(1e-12));

  JointPmf ident = testutil::identity_joint(3);
  pic::PicDecomposition di = pic::decompose(ident);
  pic::MmseReport ri = pic::mmse_of_function(ident, di, {1.0, 0.0, -1.0});
  CHECK(ri.mmse == doctest::Approx(0.0).epsilon(1e-10));

  CHECK_THROWS_WITH_AS(pic::mmse_of_function(ident, di, {2.0, 2.0, 2.0}),
                       doctest::Contains("DegenerateFunction"), Error);
}

TEST_CASE("k-correlation") {
  JointPmf bsc = testutil::bsc_joint(0.1);
  pic::PicDecomposition dec = pic::decompose(bsc);
  CHECK(pic::k_correlation(dec, 1) == doctest::Approx(0.64).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(pic::k_correlation(dec, 2), doctest::Contains("IndexOutOfRange"),
                       Error);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(2, 5);
    JointPmf j = testutil::random_joint(rng, dim(rng), dim(rng));
    pic::PicDecomposition d = pic::decompose(j);
    CHECK(pic::k_correlation(d, d.d) ==
          doctest::Approx(dist::chi_squared(j)).epsilon(1e-9).scale(1.0));
  }

  pic::PicDecomposition ind =
      pic::decompose(testutil::independent_joint({0.5, 0.5}, {0.25, 0.25, 0.5}));
  CHECK(pic::k_correlation(ind, 1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("maximal correlation") {
  CHECK(pic::maximal_correlation(pic::decompose(testutil::bsc_joint(0.1))) ==
        doctest::Approx(0.8).epsilon(1e-12));
  CHECK(pic::maximal_correlation(
            pic::decompose(testutil::independent_joint({0.4, 0.6}, {0.5, 0.5}))) ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK(pic::maximal_correlation(pic::decompose(testutil::identity_joint(4))) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("k-correlation is convex in the channel") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(2, 4);
    const std::size_t m = dim(rng), n = dim(rng);
    const std::vector<double> px = testutil::random_pmf(rng, m);
    Channel w0 = testutil::random_channel(rng, m, n);
    Channel w1 = testutil::random_channel(rng, m, n);
    for (std::size_t k = 1; k < std::min(m, n); ++k) {
      auto jk = [&](const Channel& w) {
        return pic::k_correlation(pic::decompose(dist::joint_from_channel(px, w)), k);
      };
      const double j0 = jk(w0), j1 = jk(w1);
      for (double alpha : {0.25, 0.5, 0.75}) {
        linalg::Matrix mix(m, n);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t c = 0; c < n; ++c)
            mix(i, c) = alpha * w0(i, c) + (1.0 - alpha) * w1(i, c);
        CHECK(jk(Channel(mix)) <= alpha * j0 + (1.0 - alpha) * j1 + 1e-8);
      }
    }
  }
}

TEST_CASE("tensorization") {
  pic::PicDecomposition bsc = pic::decompose(testutil::bsc_joint(0.1));
  std::vector<double> prod = pic::tensorize(bsc, bsc);
  REQUIRE(prod.size() == 3);
  CHECK(prod[0] == doctest::Approx(0.64).epsilon(1e-12));
  CHECK(prod[1] == doctest::Approx(0.64).epsilon(1e-12));
  CHECK(prod[2] == doctest::Approx(0.4096).epsilon(1e-12));

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(2, 3);
    JointPmf a = testutil::random_joint(rng, dim(rng), dim(rng));
    JointPmf b = testutil::random_joint(rng, dim(rng), dim(rng));
    pic::PicDecomposition da = pic::decompose(a);
    pic::PicDecomposition db = pic::decompose(b);
    std::vector<double> expect = pic::tensorize(da, db);
    JointPmf prod_joint(linalg::kron(a.table(), b.table()));
    std::vector<double> got = pic::decompose(prod_joint).lambdas;
    // The product source can have extra PICs past the pairwise products;
    // they all vanish, since rank(Q_a (x) Q_b) = rank(Q_a) rank(Q_b).
    REQUIRE(got.size() >= expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i)
      CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-9).scale(1.0));
    for (std::size_t i = expect.size(); i < got.size(); ++i)
      CHECK(got[i] == doctest::Approx(0.0).epsilon(1e-9));

    // lambda_1 of the product is the max of the factors'
    const double l1a = da.d ? da.lambdas[0] : 0.0;
    const double l1b = db.d ? db.lambdas[0] : 0.0;
    CHECK(expect[0] == doctest::Approx(std::max(l1a, l1b)).epsilon(1e-12));
  }

  // products with an all-zero partner pad with zeros
  pic::PicDecomposition ind =
      pic::decompose(testutil::independent_joint({0.5, 0.5}, {0.5, 0.5}));
  std::vector<double> padded = pic::tensorize(bsc, ind);
  CHECK(padded[0] == doctest::Approx(0.64));
  for (std::size_t i = 1; i < padded.size(); ++i)
    CHECK(padded[i] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("conforming joints") {
  CHECK(pic::is_conforming(testutil::bsc_joint(0.1)));
  std::mt19937_64 rect_rng(3);
  CHECK_FALSE(pic::is_conforming(testutil::random_joint(rect_rng, 2, 3)));

  linalg::Matrix anti(2, 2);
  anti(0, 0) = 0.05;
  anti(0, 1) = 0.45;
  anti(1, 0) = 0.45;
  anti(1, 1) = 0.05;
  CHECK_FALSE(pic::is_conforming(JointPmf(anti)));  // symmetric but indefinite

  // Lemma conf: symmetric psd channel with uniform input -> eigenvalues of
  // the channel squared are the PICs.
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t m = 3;
    // random symmetric doubly-stochastic psd channel: W = a I + (1-a) J/m
    // mixed with a random symmetric perturbation kept psd by dominance
    std::uniform_real_distribution<double> unif(0.0, 0.2);
    linalg::Matrix w(m, m, 0.0);
    const double a = 0.5 + unif(rng);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k) w(i, k) = (i == k ? a : 0.0) + (1.0 - a) / m;
    const double eps = unif(rng) * 0.1;
    w(0, 1) += eps;
    w(1, 0) += eps;
    w(0, 0) -= eps;
    w(1, 1) -= eps;
    linalg::SymmetricEigen eig = linalg::jacobi_eigen(w);
    if (eig.values.back() < 0.0) continue;
    std::vector<double> px(m, 1.0 / m);
    JointPmf j = dist::joint_from_channel(px, Channel(w));
    REQUIRE(pic::is_conforming(j, 1e-9));
    pic::PicDecomposition dec = pic::decompose(j);
    for (std::size_t k = 0; k < dec.d; ++k) {
      CHECK(eig.values[k + 1] >= -1e-10);
      CHECK(dec.lambdas[k] ==
            doctest::Approx(eig.values[k + 1] * eig.values[k + 1]).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("flatten_to_max") {
  JointPmf bsc = testutil::bsc_joint(0.1);
  pic::PicDecomposition dec = pic::decompose(bsc);
  Channel flat = pic::flatten_to_max(bsc, dec);
  // q=2, rho=0.8 -> eps = (q-1)(1-rho)/q = 0.1
  CHECK(flat(0, 0) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(flat(0, 1) == doctest::Approx(0.1).epsilon(1e-12));

  Channel ident = pic::flatten_to_max(testutil::identity_joint(3),
                                      pic::decompose(testutil::identity_joint(3)));
  CHECK(ident(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ident(0, 1) == doctest::Approx(0.0).epsilon(1e-10));

  JointPmf ind = testutil::independent_joint({0.25, 0.75}, {0.25, 0.75});
  Channel rank1 = pic::flatten_to_max(ind, pic::decompose(ind));
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(rank1(i, 0) == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(rank1(i, 1) == doctest::Approx(0.75).epsilon(1e-9));
  }

  CHECK_THROWS_WITH_AS(
      pic::flatten_to_max(testutil::independent_joint({0.5, 0.5}, {0.25, 0.25, 0.5}), dec),
      doctest::Contains("NotConforming"), Error);
}

namespace {

// Conforming joint with marginal p and prescribed non-leading singular
// values: P = D^{1/2} (sqrt(p) sqrt(p)^T + sum_k s_k v_k v_k^T) D^{1/2}
// over an orthonormal completion {v_k} of sqrt(p).
JointPmf conforming_with_spectrum(const std::vector<double>& p,
                                  const std::vector<double>& sigmas) {
  const std::size_t m = p.size();
  linalg::Matrix basis(m, m);
  for (std::size_t i = 0; i < m; ++i) basis(i, 0) = std::sqrt(p[i]);
  for (std::size_t k = 1; k < m; ++k) {
    std::vector<double> w(m, 0.0);
    w[k] = 1.0;
    for (std::size_t c = 0; c < k; ++c) {
      double dot = 0.0;
      for (std::size_t i = 0; i < m; ++i) dot += w[i] * basis(i, c);
      for (std::size_t i = 0; i < m; ++i) w[i] -= dot * basis(i, c);
    }
    double norm = 0.0;
    for (double v : w) norm += v * v;
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < m; ++i) basis(i, k) = w[i] / norm;
  }
  linalg::Matrix table(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double q = basis(i, 0) * basis(j, 0);
      for (std::size_t k = 1; k < m; ++k) q += sigmas[k - 1] * basis(i, k) * basis(j, k);
      table(i, j) = std::sqrt(p[i]) * q * std::sqrt(p[j]);
    }
  return JointPmf(table);
}

}  // namespace

TEST_CASE("flattening raises every PIC to the largest one") {
  // non-uniform marginal, distinct spectrum
  JointPmf j = conforming_with_spectrum({0.5, 0.3, 0.2}, {0.3, 0.1});
  REQUIRE(pic::is_conforming(j, 1e-9));
  pic::PicDecomposition dec = pic::decompose(j);
  CHECK(dec.lambdas[0] == doctest::Approx(0.09).epsilon(1e-10));
  CHECK(dec.lambdas[1] == doctest::Approx(0.01).epsilon(1e-10));

  Channel flat = pic::flatten_to_max(j, dec);
  JointPmf flattened = dist::joint_from_channel(j.p_x(), flat);
  for (double l : pic::decompose(flattened).lambdas)
    CHECK(l == doctest::Approx(0.09).epsilon(1e-9));
  // the flattened joint keeps the marginal and is itself conforming
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(flattened.p_y()[i] == doctest::Approx(j.p_x()[i]).epsilon(1e-12));
  CHECK(pic::is_conforming(flattened, 1e-9));

  // uniform marginal on [3]: the flattening is the symmetric channel with
  // crossover (q-1)(1-sigma_1)/q
  JointPmf uni = conforming_with_spectrum({1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.4, 0.25});
  Channel sc = pic::flatten_to_max(uni, pic::decompose(uni));
  const double eps = 2.0 * (1.0 - 0.4) / 3.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k)
      CHECK(sc(i, k) == doctest::Approx(i == k ? 1.0 - eps : eps / 2.0).epsilon(1e-10));
}

TEST_CASE("data processing inequality") {
  JointPmf bsc = testutil::bsc_joint(0.1);

  pic::DpiReport ident = pic::dpi_check(bsc, Channel(linalg::Matrix::identity(2)));
  CHECK(ident.pass);
  CHECK(ident.lhs[0] == doctest::Approx(0.64).epsilon(1e-10));

  pic::DpiReport constant = pic::dpi_check(bsc, Channel(linalg::Matrix(2, 2, 0.5)));
  CHECK(constant.pass);
  CHECK(constant.lhs[0] == doctest::Approx(0.0).epsilon(1e-10));

  // cascade of BSC(0.1) and BSC(0.2) is BSC(0.26)
  pic::DpiReport cascade = pic::dpi_check(bsc, Channel::bsc(0.2));
  CHECK(cascade.pass);
  CHECK(cascade.lhs[0] == doctest::Approx(0.2304).epsilon(1e-10));
  CHECK(cascade.rhs[0] == doctest::Approx(0.36 * 0.64).epsilon(1e-10));

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(2, 5);
    JointPmf j = testutil::random_joint(rng, dim(rng), dim(rng));
    Channel ch = testutil::random_channel(rng, j.cols(), dim(rng));
    CHECK(pic::dpi_check(j, ch).pass);
  }
}

TEST_CASE("DPI for MMSE") {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(2, 5);
    JointPmf j_xy = testutil::random_joint(rng, dim(rng), dim(rng));
    Channel ch = testutil::random_channel(rng, j_xy.cols(), dim(rng));
    JointPmf j_xz = pic::compose_markov(j_xy, ch);

    linalg::Matrix pyz(j_xy.cols(), ch.cols());
    for (std::size_t y = 0; y < j_xy.cols(); ++y)
      for (std::size_t z = 0; z < ch.cols(); ++z) pyz(y, z) = j_xy.p_y()[y] * ch(y, z);
    JointPmf j_yz(pyz);
    const double l1 = pic::decompose(j_yz).lambdas[0];

    std::vector<double> f(j_xy.rows());
    for (double& v : f) v = gauss(rng);
    double mean = 0.0;
    for (std::size_t x = 0; x < f.size(); ++x) mean += j_xy.p_x()[x] * f[x];
    for (double& v : f) v -= mean;

    CHECK(norm_e_f_given(j_xz, f, true) <= l1 * norm_e_f_given(j_xy, f, true) + 1e-8);
  }
}

TEST_CASE("tie clusters are reported") {
  pic::PicDecomposition ident = pic::decompose(testutil::identity_joint(4));
  REQUIRE(ident.ties.size() == 1);
  CHECK(ident.ties[0][0] == 0);
  CHECK(ident.ties[0][1] == 2);
}
