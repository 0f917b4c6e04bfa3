#include "scour/baselines.hpp"
#include "scour/error.hpp"
#include "synthetic.hpp"

#include <doctest.h>

#include <cmath>

using namespace scour;

namespace {

struct Probe {
    double sigma, fr, dy, d50y, ly;
};

constexpr Probe kProbes[3] = {
    {1.454, 0.377, 0.704, 0.007, 5.3487},
    {3.358, 0.2703, 1.251, 0.0106, 5.3487},
    {2.0, 1.1, 12.5, 0.05, 30.0},
};

// Independent high-precision evaluations at kProbes.
struct Expected {
    BaselineId id;
    double values[3];
};

constexpr Expected kExpected[] = {
    {BaselineId::LaursenToch1956, {1.0559287870172950276, 1.5791154594634414652, 7.9098960766233356125}},
    {BaselineId::Shen1969, {1.3979811106179190015, 1.6442890518924952627, 19.685285816106524118}},
    {BaselineId::Johnson1992, {0.80852069484042423927, 0.58316590460333990709, 12.416701774691142048}},
    {BaselineId::RichardsonDavis2001, {1.185909284124024056, 1.2231899969906139131, 8.1950177565928877686}},
    {BaselineId::HEC18, {1.0989256333099214866, 1.3839816938812615501, 11.298210392665688182}},
    {BaselineId::Azamathulla2009, {0.57507073860723877424, 0.42189734178263074956, 0.22889370581394901881}},
    {BaselineId::Sharafi2016, {0.38467246454098166993, 0.45318537663600673319, 2.8722866962438223458}},
};

DimensionlessRecord at(const Probe& p) {
    DimensionlessRecord r;
    r.scale = Scale::Field;
    r.gradation = p.sigma;
    r.froude = p.fr;
    r.width_ratio = p.dy;
    r.grain_ratio = p.d50y;
    r.fifth_feature = p.ly;
    r.flow_depth = 1.0;
    return r;
}

RawScourRecord hancu_raw(double v, double vc, double d, double y) {
    RawScourRecord r;
    r.scale = Scale::Laboratory;
    r.mean_velocity = v;
    r.critical_velocity = vc;
    r.pier_width = d;
    r.flow_depth = y;
    r.d50 = 0.001;
    r.gradation = 1.5;
    r.scour_depth = 0.1;
    return r;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST_CASE("formulas match high-precision probe evaluations") {
    for (const auto& e : kExpected)
        for (int i = 0; i < 3; ++i) {
            INFO(baseline_info(e.id).key << " probe " << i);
            CHECK(rel(evaluate_baseline(e.id, at(kProbes[i])), e.values[i]) < 1e-12);
        }
}

TEST_CASE("identity inputs expose the leading coefficients") {
    DimensionlessRecord r = at({1.0, 1.0, 1.0, 1.0, 1.0});
    CHECK(evaluate_baseline(BaselineId::LaursenToch1956, r) == 1.35);
    CHECK(evaluate_baseline(BaselineId::Shen1969, r) == 3.4);
    CHECK(evaluate_baseline(BaselineId::RichardsonDavis2001, r) == 2.6);
    CHECK(evaluate_baseline(BaselineId::HEC18, r) == 2.1);
}

TEST_CASE("Richardson-Davis desk value") {
    auto r = at(kProbes[1]);
    CHECK(evaluate_baseline(BaselineId::RichardsonDavis2001, r) ==
          doctest::Approx(1.2231899969906137).epsilon(1e-13));
}

TEST_CASE("Hancu") {
    struct Case {
        double v, vc, d, y, printed, squared;
    };
    const Case cases[] = {
        {0.512, 0.443, 0.107, 0.269, 0.94697006419340453658, 0.7218896672993893621},
        {1.0, 0.3, 0.5, 0.4, 6.7537833742807624294, 4.5212051284606800721},
        {0.3, 0.25, 0.015, 0.05, 1.2128057215416049857, 0.76401972900160407249},
    };
    for (const auto& c : cases) {
        const auto raw = hancu_raw(c.v, c.vc, c.d, c.y);
        const auto printed = evaluate_baseline(BaselineId::Hancu1971, raw);
        CHECK_FALSE(printed.clamped);
        CHECK(rel(printed.s_over_y, c.printed) < 1e-12);
        const auto squared = evaluate_baseline(BaselineId::Hancu1971, raw, {.hancu_squared = true});
        CHECK(rel(squared.s_over_y, c.squared) < 1e-12);
    }
    SUBCASE("below the live-bed threshold is clamped") {
        const auto p = evaluate_baseline(BaselineId::Hancu1971, hancu_raw(0.2, 0.4, 0.1, 0.2));
        CHECK(p.clamped);
        CHECK(p.s_over_y == 0.0);
        const auto edge = evaluate_baseline(BaselineId::Hancu1971, hancu_raw(0.2, 0.4 + 1e-12, 0.1, 0.2));
        CHECK(edge.clamped);
    }
    SUBCASE("needs dimensional inputs") {
        CHECK_THROWS_AS(evaluate_baseline(BaselineId::Hancu1971, at(kProbes[0])), MissingInputError);
        auto field = hancu_raw(1, 0.5, 1, 1);
        field.scale = Scale::Field;
        field.critical_velocity.reset();
        field.pier_length = 3.0;
        CHECK_FALSE(baseline_applicable(BaselineId::Hancu1971, field));
        CHECK_THROWS_AS(evaluate_baseline(BaselineId::Hancu1971, field), MissingInputError);
    }
}

TEST_CASE("pier length formulas need L/y") {
    auto lab = at(kProbes[0]);
    lab.scale = Scale::Laboratory;
    try {
        evaluate_baseline(BaselineId::Sharafi2016, lab);
        FAIL("expected MissingInputError");
    } catch (const MissingInputError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("Sharafi") != std::string::npos);
        CHECK(msg.find("L/y") != std::string::npos);
    }
    CHECK_THROWS_AS(evaluate_baseline(BaselineId::Azamathulla2009, lab), MissingInputError);
}

TEST_CASE("formulas are unchanged when lengths scale together") {
    const auto gen = testing::full_model(Scale::Field, 1.0, {0, 0, 0, 0, 0});
    auto field = testing::generate(gen, 50, 4, testing::field_ranges());
    const auto lgen = testing::full_model(Scale::Laboratory, 1.0, {0, 0, 0, 0, 0});
    auto lab = testing::generate(lgen, 50, 5, testing::lab_ranges());
    for (auto records : {field, lab}) {
        for (const auto& r : records) {
            for (double k : {2.0, 0.3}) {
                // Lengths scale by k, velocities by sqrt(k): every dimensionless input is kept.
                auto s = r;
                s.pier_width *= k;
                s.flow_depth *= k;
                s.d50 *= k;
                s.scour_depth *= k;
                s.mean_velocity *= std::sqrt(k);
                if (s.critical_velocity) *s.critical_velocity *= std::sqrt(k);
                if (s.pier_length) *s.pier_length *= k;
                // Hancu's printed Vc/(gD) carries units, so only the squared form is scale-free.
                const BaselineOptions opt{.hancu_squared = true};
                for (const auto& info : all_baselines()) {
                    if (!baseline_applicable(info.id, r)) continue;
                    const double a = evaluate_baseline(info.id, r, opt).s_over_y;
                    const double b = evaluate_baseline(info.id, s, opt).s_over_y;
                    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
                }
            }
        }
    }
}

TEST_CASE("positivity within data ranges") {
    const auto gen = testing::full_model(Scale::Field, 1.0, {0, 0, 0, 0, 0});
    for (const auto& r : testing::generate(gen, 300, 8, testing::field_ranges()))
        for (const auto& info : all_baselines())
            if (baseline_applicable(info.id, r)) CHECK(evaluate_baseline(info.id, r).s_over_y > 0.0);

    const auto lgen = testing::full_model(Scale::Laboratory, 1.0, {0, 0, 0, 0, 0});
    for (const auto& r : testing::generate(lgen, 300, 9, testing::lab_ranges())) {
        for (const auto& info : all_baselines()) {
            if (!baseline_applicable(info.id, r)) continue;
            const auto p = evaluate_baseline(info.id, r);
            if (info.id == BaselineId::Hancu1971 && 2.0 * r.mean_velocity / *r.critical_velocity <= 1.0)
                CHECK(p.clamped);
            else
                CHECK(p.s_over_y > 0.0);
        }
    }
}

TEST_CASE("registry") {
    CHECK(all_baselines().size() == 8);
    for (const auto& info : all_baselines()) {
        CHECK(parse_baseline(info.key) == info.id);
        CHECK(&baseline_info(info.id) == &info);
    }
    CHECK_THROWS_AS(parse_baseline("melville_1988"), ConfigError);
    CHECK(baseline_info(BaselineId::HEC18).laboratory_origin);
    CHECK(baseline_info(BaselineId::HEC18).field_origin);
    CHECK_FALSE(baseline_info(BaselineId::RichardsonDavis2001).laboratory_origin);
}

TEST_CASE("suite") {
    const auto lgen = testing::full_model(Scale::Laboratory, 1.0, {0, 0, 0, 0, 0});
    const auto lab = testing::generate(lgen, 10, 1, testing::lab_ranges());
    SUBCASE("field-only formula on laboratory records") {
        const BaselineId ids[] = {BaselineId::Sharafi2016};
        const auto t = run_baseline_suite(ids, lab);
        REQUIRE(t.columns.size() == 1);
        CHECK(t.columns[0].skipped == 10);
        for (const auto& p : t.columns[0].predictions) CHECK_FALSE(p.has_value());
    }
    SUBCASE("one record, every applicable formula") {
        std::vector<BaselineId> ids;
        for (const auto& info : all_baselines()) ids.push_back(info.id);
        auto one = lab;
        one.resize(1);
        one[0].mean_velocity = *one[0].critical_velocity; // live bed for Hancu
        const auto t = run_baseline_suite(ids, one);
        std::size_t applicable = 0;
        for (const auto& col : t.columns) {
            if (!col.predictions[0]) continue;
            ++applicable;
            CHECK(std::isfinite(*col.predictions[0]));
        }
        CHECK(applicable == 6);
    }
}
