#include "prefopt/core_types.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace prefopt;

TEST(PreferenceFromValues, Branches) {
    EXPECT_EQ(preference_from_values(1.0, 2.0), Preference::FirstBetter);
    EXPECT_EQ(preference_from_values(3.0, 3.0), Preference::Tie);
    EXPECT_EQ(preference_from_values(2.0, 1.0), Preference::SecondBetter);
}

TEST(PreferenceFromValues, RejectsNonFinite) {
    EXPECT_THROW(preference_from_values(NAN, 1.0), InvalidValueError);
    EXPECT_THROW(preference_from_values(1.0, INFINITY), InvalidValueError);
}

TEST(PreferenceFromValues, AntisymmetryProperty) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int k = 0; k < 1000; ++k) {
        double a = u(rng), b = (k % 10 == 0) ? a : u(rng);
        EXPECT_EQ(to_int(preference_from_values(a, b)), -to_int(preference_from_values(b, a)));
        EXPECT_EQ(preference_from_values(a, a), Preference::Tie);
    }
}

TEST(PreferenceFromInt, RangeChecked) {
    EXPECT_EQ(preference_from_int(-1), Preference::FirstBetter);
    EXPECT_THROW(preference_from_int(5), InvalidValueError);
    EXPECT_THROW(preference_from_int(-2), InvalidValueError);
}

TEST(TransitiveConsistency, EmptyIsConsistent) {
    EXPECT_TRUE(check_transitive_consistency({}).consistent);
}

TEST(TransitiveConsistency, DetectsViolatedTriple) {
    std::vector<PreferenceRecord> prefs{{1, 2, Preference::FirstBetter},
                                        {2, 3, Preference::FirstBetter},
                                        {1, 3, Preference::SecondBetter}};
    auto report = check_transitive_consistency(prefs);
    EXPECT_FALSE(report.consistent);
    ASSERT_EQ(report.violations.size(), 1u);
    EXPECT_EQ(report.violations[0], (ViolatedTriple{1, 2, 3}));
}

TEST(TransitiveConsistency, AcceptsTransitiveChain) {
    std::vector<PreferenceRecord> prefs{{1, 2, Preference::FirstBetter},
                                        {2, 3, Preference::FirstBetter},
                                        {1, 3, Preference::FirstBetter}};
    EXPECT_TRUE(check_transitive_consistency(prefs).consistent);
}

TEST(TransitiveConsistency, ReversedRecordOrientation) {
    // (3,1,+1) states 1 better than 3, which agrees with the chain.
    std::vector<PreferenceRecord> ok{{1, 2, Preference::FirstBetter},
                                     {3, 2, Preference::SecondBetter},
                                     {3, 1, Preference::SecondBetter}};
    EXPECT_TRUE(check_transitive_consistency(ok).consistent);
    std::vector<PreferenceRecord> tie{{1, 2, Preference::FirstBetter},
                                      {2, 3, Preference::FirstBetter},
                                      {3, 1, Preference::Tie}};
    EXPECT_FALSE(check_transitive_consistency(tie).consistent);
}

TEST(TransitiveConsistency, OrderIndependentProperty) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> idx(0, 5), out(-1, 1);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<PreferenceRecord> prefs;
        for (int h = 0; h < 7; ++h) {
            std::size_t i = idx(rng), j = idx(rng);
            if (i == j) continue;
            prefs.push_back({i, j, preference_from_int(out(rng))});
        }
        bool flag = check_transitive_consistency(prefs).consistent;
        std::shuffle(prefs.begin(), prefs.end(), rng);
        EXPECT_EQ(check_transitive_consistency(prefs).consistent, flag);
    }
}

TEST(SampleSet, RejectsDuplicatesAndBadDimensions) {
    SampleSet set(2);
    set.push_back(Vector::Zero(2));
    Vector near = Vector::Zero(2);
    near[0] = 1e-7;  // squared distance 1e-14 < guard
    EXPECT_THROW(set.push_back(near), DuplicateSampleError);
    EXPECT_THROW(set.push_back(Vector::Zero(3)), DimensionError);
    near[0] = 1e-5;
    set.push_back(near);
    EXPECT_EQ(set.size(), 2u);
}

TEST(BoxBounds, Validation) {
    BoxBounds ok{Vector::Zero(2), Vector::Ones(2)};
    EXPECT_NO_THROW(ok.validate());
    BoxBounds bad{Vector::Ones(2), Vector::Zero(2)};
    EXPECT_THROW(bad.validate(), InfeasibleError);
}

TEST(KernelFamily, TagRoundTrip) {
    for (auto k : {KernelFamily::InverseQuadratic, KernelFamily::Gaussian, KernelFamily::ThinPlateSpline,
                   KernelFamily::Multiquadric, KernelFamily::Linear}) {
        EXPECT_EQ(kernel_from_string(to_string(k)), k);
    }
    EXPECT_THROW(kernel_from_string("cubic"), ConfigError);
}

TEST(FitConfig, Validation) {
    FitConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.sigma = 0.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.sigma = 1.0;
    cfg.weights = {1.0, -1.0};
    EXPECT_THROW(cfg.validate(), ConfigError);
}
