#include "prefopt/surrogate.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace prefopt;

namespace {

SampleSet line_samples(std::initializer_list<double> xs) {
    SampleSet s(1);
    for (double x : xs) s.push_back(Vector::Constant(1, x));
    return s;
}

FitConfig unit_config() {
    FitConfig cfg;
    cfg.sigma = 1.0;
    cfg.lambda = 1.0;
    return cfg;
}

}  // namespace

TEST(KernelValue, Examples) {
    EXPECT_DOUBLE_EQ(kernel_value(KernelFamily::Gaussian, 1.0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(kernel_value(KernelFamily::InverseQuadratic, 1.0, 1.0), 0.5);
    EXPECT_DOUBLE_EQ(kernel_value(KernelFamily::ThinPlateSpline, 3.7, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(kernel_value(KernelFamily::Multiquadric, 2.0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(kernel_value(KernelFamily::Linear, 2.0, 1.5), 3.0);
    // (eps d)^2 log(eps d) at eps d = e
    EXPECT_NEAR(kernel_value(KernelFamily::ThinPlateSpline, 1.0, std::exp(1.0)), std::exp(2.0), 1e-12);
}

TEST(KernelMatrix, TwoSampleFixture) {
    KernelMatrix km = build_kernel_matrix(line_samples({0.0, 1.0}), 1.0, KernelFamily::InverseQuadratic);
    ASSERT_EQ(km.psi.rows(), 2);
    EXPECT_DOUBLE_EQ(km.psi(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(km.psi(0, 1), 0.5);
    EXPECT_DOUBLE_EQ(km.psi(1, 0), 0.5);
    EXPECT_DOUBLE_EQ(km.psi(1, 1), 1.0);
}

TEST(KernelMatrix, SingleSample) {
    KernelMatrix km = build_kernel_matrix(line_samples({0.3}), 1.0, KernelFamily::InverseQuadratic);
    EXPECT_EQ(km.psi.rows(), 1);
    EXPECT_DOUBLE_EQ(km.psi(0, 0), 1.0);
    KernelMatrix tps = build_kernel_matrix(line_samples({0.3, 0.9}), 1.0, KernelFamily::ThinPlateSpline);
    EXPECT_DOUBLE_EQ(tps.psi(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(tps.psi(1, 1), 0.0);
}

TEST(KernelMatrix, AppendMatchesRebuild) {
    KernelMatrix km = build_kernel_matrix(line_samples({0.0, 1.0}), 1.0, KernelFamily::InverseQuadratic);
    KernelMatrix grown = append_sample(km, Vector::Constant(1, 2.0));
    KernelMatrix full = build_kernel_matrix(line_samples({0.0, 1.0, 2.0}), 1.0, KernelFamily::InverseQuadratic);
    EXPECT_LE((grown.psi - full.psi).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(KernelMatrix, AppendMatchesRebuildProperty) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto kernel : {KernelFamily::InverseQuadratic, KernelFamily::Gaussian, KernelFamily::ThinPlateSpline}) {
        SampleSet all(3);
        for (int i = 0; i < 12; ++i) all.push_back(Vector::NullaryExpr(3, [&]() { return u(rng); }));
        KernelMatrix incremental = build_kernel_matrix(SampleSet(3, {all[0]}), 1.7, kernel);
        for (std::size_t i = 1; i < all.size(); ++i) incremental = append_sample(incremental, all[i]);
        KernelMatrix full = build_kernel_matrix(all, 1.7, kernel);
        EXPECT_LE((incremental.psi - full.psi).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_TRUE(full.psi.isApprox(full.psi.transpose()));
    }
}

TEST(KernelMatrix, AppendRejectsDuplicate) {
    KernelMatrix km = build_kernel_matrix(line_samples({0.0, 1.0}), 1.0, KernelFamily::InverseQuadratic);
    EXPECT_THROW(append_sample(km, Vector::Constant(1, 1.0)), DuplicateSampleError);
}

// Closed-form KKT of the two-sample fit (see test_qp_solver): beta = (-0.5, 0.5), slack 0.5.
TEST(FitSurrogate, TwoSampleStrictPreference) {
    auto s = fit_surrogate(line_samples({0.0, 1.0}), {{0, 1, Preference::FirstBetter}}, unit_config(), 1.0,
                           KernelFamily::InverseQuadratic);
    EXPECT_NEAR(s.beta()[0], -0.5, 1e-6);
    EXPECT_NEAR(s.beta()[1], 0.5, 1e-6);
    EXPECT_NEAR(s.slacks[0], 0.5, 1e-6);
    EXPECT_NEAR(s.objective, 0.75, 1e-6);
    Vector y = s.values_at_samples();
    EXPECT_NEAR(y[0], -0.25, 1e-6);
    EXPECT_NEAR(y[1], 0.25, 1e-6);
    EXPECT_NEAR(surrogate_range(s), 0.5, 1e-6);
}

TEST(FitSurrogate, TiePreferenceIsFreeAtZero) {
    auto s = fit_surrogate(line_samples({0.0, 1.0}), {{0, 1, Preference::Tie}}, unit_config(), 1.0,
                           KernelFamily::InverseQuadratic);
    EXPECT_NEAR(s.beta().cwiseAbs().maxCoeff(), 0.0, 1e-6);
    EXPECT_NEAR(s.slacks[0], 0.0, 1e-6);
}

TEST(FitSurrogate, ContradictoryPreferencesNeedSlack) {
    auto s = fit_surrogate(line_samples({0.0, 1.0}),
                           {{0, 1, Preference::FirstBetter}, {0, 1, Preference::SecondBetter}}, unit_config(), 1.0,
                           KernelFamily::InverseQuadratic);
    EXPECT_TRUE(s.beta().allFinite());
    EXPECT_GT(s.slacks.maxCoeff(), 1e-3);
}

TEST(FitSurrogate, AnchorPinsBestSampleAtZero) {
    SampleSet X = line_samples({0.0, 0.7, 1.5, 2.0});
    std::vector<PreferenceRecord> prefs{{0, 1, Preference::SecondBetter}, {1, 2, Preference::FirstBetter},
                                        {1, 3, Preference::FirstBetter}};
    FitConfig cfg;
    cfg.sigma = 0.1;
    auto s = fit_surrogate(X, prefs, cfg, 1.0, KernelFamily::InverseQuadratic, std::size_t{1});
    EXPECT_NEAR(s.evaluate(X[1]), 0.0, 1e-7);
}

TEST(FitSurrogate, LinearProgramMode) {
    SampleSet X = line_samples({-2.0, -1.0, 0.5, 1.7, 2.6});
    std::vector<PreferenceRecord> prefs{{0, 1, Preference::SecondBetter}, {1, 2, Preference::SecondBetter},
                                        {2, 3, Preference::FirstBetter}, {2, 4, Preference::FirstBetter}};
    FitConfig cfg;
    cfg.sigma = 0.2;
    cfg.lambda = 0.0;
    auto s = fit_surrogate(X, prefs, cfg, 2.0, KernelFamily::InverseQuadratic);
    EXPECT_TRUE(s.beta().allFinite());
    EXPECT_NEAR(s.slacks.sum(), 0.0, 1e-6);
    Vector y = s.values_at_samples();
    EXPECT_LE(y[2] - y[3], -cfg.sigma + 1e-6);
}

TEST(FitSurrogate, Errors) {
    EXPECT_THROW(fit_surrogate(line_samples({0.0, 1.0}), {}, unit_config(), 1.0, KernelFamily::Gaussian),
                 InvalidValueError);
    EXPECT_THROW(fit_surrogate(line_samples({0.0, 1.0}), {{0, 2, Preference::Tie}}, unit_config(), 1.0,
                               KernelFamily::Gaussian),
                 InvalidValueError);
    FitConfig bad = unit_config();
    bad.sigma = -1.0;
    EXPECT_THROW(fit_surrogate(line_samples({0.0, 1.0}), {{0, 1, Preference::Tie}}, bad, 1.0, KernelFamily::Gaussian),
                 ConfigError);
}

TEST(EvaluateSurrogate, Fixture) {
    auto s = fit_surrogate(line_samples({0.0, 1.0}), {{0, 1, Preference::FirstBetter}}, unit_config(), 1.0,
                           KernelFamily::InverseQuadratic);
    EXPECT_NEAR(s.evaluate(Vector::Constant(1, 0.0)), -0.25, 1e-6);
    EXPECT_NEAR(s.evaluate(Vector::Constant(1, 0.5)), 0.0, 1e-6);
    Matrix pts(1, 3);
    pts << 0.0, 0.5, 1.0;
    Vector batch = s.evaluate_batch(pts);
    for (int c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(batch[c], s.evaluate(pts.col(c)));
    EXPECT_THROW(s.evaluate(Vector::Zero(2)), DimensionError);
}

TEST(EvaluateSurrogate, ZeroCoefficients) {
    RBFSurrogate s(line_samples({0.0, 1.0}), Vector::Zero(2), 1.0, KernelFamily::InverseQuadratic);
    EXPECT_EQ(s.evaluate(Vector::Constant(1, 0.3)), 0.0);
    EXPECT_DOUBLE_EQ(surrogate_range(s), kMinSurrogateRange);
}

namespace {

struct RandomInstance {
    SampleSet X;
    std::vector<PreferenceRecord> prefs;
};

RandomInstance random_instance(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    RandomInstance inst{SampleSet(2), {}};
    for (int i = 0; i < 7; ++i) inst.X.push_back(Vector::NullaryExpr(2, [&]() { return u(rng); }));
    auto latent = [](const Vector& x) { return (x.array() - 0.2).square().sum() + std::sin(3.0 * x[0]); };
    for (std::size_t h = 1; h < inst.X.size(); ++h) {
        std::size_t i = h - 1, j = h;
        inst.prefs.push_back({i, j, preference_from_values(latent(inst.X[i]), latent(inst.X[j]))});
    }
    inst.prefs.push_back({0, 6, Preference::Tie});
    return inst;
}

}  // namespace

TEST(FitSurrogateProperty, SwapAntisymmetry) {
    std::mt19937_64 rng(17);
    FitConfig cfg;
    cfg.sigma = 0.1;
    cfg.lambda = 0.1;
    for (int trial = 0; trial < 10; ++trial) {
        auto inst = random_instance(rng);
        auto swapped = inst.prefs;
        for (auto& p : swapped) {
            std::swap(p.left, p.right);
            p.outcome = negate(p.outcome);
        }
        auto a = fit_surrogate(inst.X, inst.prefs, cfg, 1.0, KernelFamily::InverseQuadratic);
        auto b = fit_surrogate(inst.X, swapped, cfg, 1.0, KernelFamily::InverseQuadratic);
        EXPECT_LE((a.beta() - b.beta()).cwiseAbs().maxCoeff(), 1e-6);
    }
}

TEST(FitSurrogateProperty, UniqueForPositiveLambda) {
    std::mt19937_64 rng(23);
    FitConfig cfg;
    cfg.sigma = 0.1;
    cfg.lambda = 0.5;
    for (int trial = 0; trial < 10; ++trial) {
        auto inst = random_instance(rng);
        auto permuted = inst.prefs;
        std::shuffle(permuted.begin(), permuted.end(), rng);
        auto a = fit_surrogate(inst.X, inst.prefs, cfg, 1.0, KernelFamily::InverseQuadratic);
        auto b = fit_surrogate(inst.X, permuted, cfg, 1.0, KernelFamily::InverseQuadratic);
        EXPECT_LE((a.beta() - b.beta()).cwiseAbs().maxCoeff(), 1e-6);
    }
}

TEST(FitSurrogateProperty, ZeroSlackPreferencesAreHonored) {
    std::mt19937_64 rng(29);
    FitConfig cfg;
    cfg.sigma = 0.05;
    for (int trial = 0; trial < 10; ++trial) {
        auto inst = random_instance(rng);
        auto s = fit_surrogate(inst.X, inst.prefs, cfg, 1.0, KernelFamily::InverseQuadratic);
        Vector y = s.values_at_samples();
        for (std::size_t h = 0; h < inst.prefs.size(); ++h) {
            if (s.slacks[static_cast<Eigen::Index>(h)] > 1e-9) continue;
            const auto& p = inst.prefs[h];
            const double diff = y[static_cast<Eigen::Index>(p.left)] - y[static_cast<Eigen::Index>(p.right)];
            switch (p.outcome) {
                case Preference::FirstBetter: EXPECT_LE(diff, -cfg.sigma + 1e-7); break;
                case Preference::SecondBetter: EXPECT_GE(diff, cfg.sigma - 1e-7); break;
                case Preference::Tie: EXPECT_LE(std::abs(diff), cfg.sigma + 1e-7); break;
            }
            // Strict outcomes are reproduced by the exact comparison rule as well.
            if (p.outcome != Preference::Tie) {
                EXPECT_EQ(preference_from_values(y[static_cast<Eigen::Index>(p.left)],
                                                 y[static_cast<Eigen::Index>(p.right)]),
                          p.outcome);
            }
        }
    }
}

TEST(SurrogateRange, StrictPreferenceWithoutSlackSeparatesBySigma) {
    FitConfig cfg;
    cfg.sigma = 0.3;
    auto s = fit_surrogate(line_samples({0.0, 1.0, 2.0}), {{0, 1, Preference::FirstBetter}}, cfg, 1.0,
                           KernelFamily::InverseQuadratic);
    ASSERT_LE(s.slacks[0], 1e-9);
    EXPECT_GE(surrogate_range(s), cfg.sigma - 1e-7);
}
