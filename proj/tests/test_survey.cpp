#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <string>
#include <vector>

#include <jacgraph/survey.hpp>

using namespace jacgraph;

// independent oracle: full double loop over (x, y) for the affine count of
// y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6
static i64 ap_doubleloop(const WeierstrassQ& E, u64 p) {
    auto md = [&](i64 v) { return (u64)((v % (i64)p + (i64)p) % (i64)p); };
    u64 a1 = md(E.a1), a2 = md(E.a2), a3 = md(E.a3), a4 = md(E.a4), a6 = md(E.a6);
    u64 cnt = 1;  // the point at infinity
    for (u64 x = 0; x < p; ++x) {
        u64 rhs = ((((x + a2) % p) * x + a4) % p * x + a6) % p;
        u64 lin = (a1 * x + a3) % p;
        for (u64 y = 0; y < p; ++y) {
            if ((y * y + lin * y) % p == rhs) ++cnt;
        }
    }
    return (i64)p + 1 - (i64)cnt;
}

static std::size_t col_index(const ScanReport& r, const std::string& name) {
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
        if (r.columns[i] == name) return i;
    }
    FAIL("missing column " + name);
    return 0;
}

static const std::vector<std::string>& row_with(const ScanReport& r, const std::string& key) {
    for (const auto& row : r.rows) {
        if (row.at(0) == key) return row;
    }
    FAIL("missing row " + key);
    static std::vector<std::string> none;
    return none;
}

static std::string summary_value(const ScanReport& r, const std::string& key) {
    for (const auto& [k, v] : r.summary) {
        if (k == key) return v;
    }
    FAIL("missing summary key " + key);
    return "";
}

TEST_CASE("ramanujan density scan") {
    SECTION("ordinary curve over F_5, split modulus") {
        CurveData E = CurveData::genus1(5, 1, 1);  // a = -3
        ScanReport r = ramanujan_density_scan(E, ModulusSpec::split(0, 1, 2, 1), 3);
        REQUIRE(r.rows.size() == 3);
        std::size_t crit = col_index(r, "criterion");
        std::size_t spec = col_index(r, "spectral");
        // n = 1: a = -3 <= -2, d_1 = 7 >= 6
        REQUIRE(row_with(r, "1").at(col_index(r, "d_n")) == "7");
        REQUIRE(row_with(r, "1").at(crit) == "1");
        REQUIRE(row_with(r, "1").at(spec) == "ramanujan");
        // n = 2: a_2 = -1 > -2, yet the 648-vertex graph measures Ramanujan
        REQUIRE(row_with(r, "2").at(crit) == "0");
        REQUIRE(row_with(r, "2").at(spec) == "ramanujan");
        // n = 3: q^3 = 125, |J| = 13392 still within the enumeration cap
        REQUIRE(row_with(r, "3").at(crit) == "0");
        REQUIRE(row_with(r, "3").at(spec) != "-");
        REQUIRE(summary_value(r, "criterion_count") == "1");
        REQUIRE(summary_value(r, "crosschecked") == "3");
    }
    SECTION("supersingular curve over F_7: criterion alternates by parity") {
        CurveData E = CurveData::genus1(7, 1, 0);  // a = 0
        ScanReport r = ramanujan_density_scan(E, ModulusSpec::split(1, 3, 3, 3), 2);
        std::size_t crit = col_index(r, "criterion");
        REQUIRE(row_with(r, "1").at(crit) == "0");  // trace 0 > -2
        REQUIRE(row_with(r, "2").at(crit) == "1");  // trace -14 <= -2
        REQUIRE(row_with(r, "2").at(col_index(r, "spectral")) == "ramanujan");
        REQUIRE(summary_value(r, "criterion_density") == "0.5");
        REQUIRE(summary_value(r, "crosschecked") == "2");
    }
    SECTION("enumeration cap degrades the cross-check gracefully") {
        CurveData E = CurveData::genus1(53, 1, 2);
        ScanReport r = ramanujan_density_scan(E, ModulusSpec::split(1, 2, 1, 51), 2);
        std::size_t spec = col_index(r, "spectral");
        REQUIRE(row_with(r, "1").at(spec) != "-");
        REQUIRE(row_with(r, "1").at(spec) != "capped");
        // q^2 = 2809 <= 3000 but |J| ~ 8 * 10^6 exceeds the enumeration cap
        REQUIRE(row_with(r, "2").at(spec) == "capped");
        REQUIRE(summary_value(r, "crosschecked") == "1");
    }
    SECTION("genus-2 curve with empty modulus") {
        CurveData C2 = CurveData::genus2(7, {1, 0, 0, 0, 0, 1});
        ScanReport r = ramanujan_density_scan(C2, ModulusSpec::empty(), 2);
        // |C(F_7)| = 8 so d_1 = 8 >= 8 and the criterion holds at n = 1
        REQUIRE(row_with(r, "1").at(col_index(r, "criterion")) == "1");
        REQUIRE(row_with(r, "1").at(col_index(r, "spectral")) == "ramanujan");
        REQUIRE(summary_value(r, "crosschecked") == "2");
    }
    SECTION("validation") {
        CurveData E = CurveData::genus1(5, 1, 1);
        CurveData C2 = CurveData::genus2(7, {1, 0, 0, 0, 0, 1});
        REQUIRE_THROWS_AS(ramanujan_density_scan(E, ModulusSpec::split(0, 1, 2, 1), 0),
                          ValidationError);
        REQUIRE_THROWS_AS(ramanujan_density_scan(E, ModulusSpec::split(0, 1, 2, 1), 201),
                          ValidationError);
        REQUIRE_THROWS_AS(ramanujan_density_scan(E, ModulusSpec::empty(), 5), ValidationError);
        REQUIRE_THROWS_AS(ramanujan_density_scan(C2, ModulusSpec::double_point(0, 1), 5),
                          ValidationError);
    }
}

TEST_CASE("prime trace scan") {
    const WeierstrassQ E{0, 0, 1, 1, -1};  // y^2 + y = x^3 + x - 1, disc -307

    SECTION("small range against the double-loop oracle") {
        ScanReport r = prime_scan_trace_stats(E, 300);
        REQUIRE(summary_value(r, "skipped_primes") == "2 3");
        std::size_t api = col_index(r, "a_p");
        for (const auto& row : r.rows) {
            u64 p = std::stoull(row.at(0));
            REQUIRE((i64)std::stoll(row.at(api)) == ap_doubleloop(E, p));
        }
        // p = 5: a = 2 with ord_5(2) = 4, both 2 and a primitive
        const auto& r5 = row_with(r, "5");
        REQUIRE(r5.at(api) == "2");
        REQUIRE(r5.at(col_index(r, "ord_a")) == "4");
        REQUIRE(r5.at(col_index(r, "a_primitive")) == "1");
        REQUIRE(r5.at(col_index(r, "two_primitive")) == "1");
        REQUIRE(r5.at(col_index(r, "anomalous")) == "0");
        // the 2-primitive counter spans skipped primes too: here only p = 3
        // qualifies (2 generates (Z/3)*, and 2 is not a unit mod 2)
        u64 rowsum = 0;
        for (const auto& row : r.rows) rowsum += row.at(col_index(r, "two_primitive")) == "1";
        REQUIRE(summary_value(r, "two_primitive_root") == std::to_string(rowsum + 1));
    }
    SECTION("the discriminant prime is skipped") {
        ScanReport r = prime_scan_trace_stats(E, 310);
        REQUIRE(summary_value(r, "skipped_primes") == "2 3 307");
    }
    SECTION("results are independent of the thread count") {
        ScanReport one = prime_scan_trace_stats(E, 300, 1);
        ScanReport four = prime_scan_trace_stats(E, 300, 4);
        REQUIRE(scan_to_csv(one) == scan_to_csv(four));
    }
    SECTION("validation") {
        REQUIRE_THROWS_AS(prime_scan_trace_stats(E, 4), ValidationError);
        REQUIRE_THROWS_AS(prime_scan_trace_stats(E, 2'000'000), ValidationError);
        REQUIRE_THROWS_AS(prime_scan_trace_stats(WeierstrassQ{0, 0, 0, 0, 0}, 100),
                          ValidationError);  // y^2 = x^3 is singular
    }
    SECTION("published counts at x_max = 300000") {
        if (!std::getenv("JACGRAPH_LONG")) {
            SKIP("set JACGRAPH_LONG=1 to run the full published-range scan");
        }
        ScanReport r = prime_scan_trace_stats(E, 300'000, default_threads());
        REQUIRE(summary_value(r, "a_primitive_root") == "9607");
        REQUIRE(summary_value(r, "two_primitive_root") == "9701");
        // regression pin; the count grows like log log x
        REQUIRE(summary_value(r, "anomalous") == "19");
    }
}

TEST_CASE("double-point trace condition") {
    SECTION("supersingular trace: satisfied through the zero branch") {
        TraceConditionReport rep =
            trace_condition_report(CurveData::genus1(7, 1, 0), ModulusSpec::double_point(1, 3));
        REQUIRE(rep.a == 0);
        REQUIRE(rep.p_divides);
        REQUIRE(rep.ord == 0);
        REQUIRE(rep.satisfied);
    }
    SECTION("trace 1 has order 1: not satisfied") {
        TraceConditionReport rep =
            trace_condition_report(CurveData::genus1(5, 3, 2), ModulusSpec::double_point(1, 1));
        REQUIRE(rep.a == 1);
        REQUIRE(rep.ord == 1);
        REQUIRE(!rep.satisfied);
    }
    SECTION("trace 2 mod 7 has order 3: not satisfied") {
        TraceConditionReport rep =
            trace_condition_report(CurveData::genus1(7, 1, 3), ModulusSpec::double_point(4, 1));
        REQUIRE(rep.a == 2);
        REQUIRE(rep.ord == 3);
        REQUIRE(!rep.satisfied);
    }
    SECTION("trace -2 mod 11 has order 5: satisfied") {
        TraceConditionReport rep =
            trace_condition_report(CurveData::genus1(11, 1, 1), ModulusSpec::double_point(0, 1));
        REQUIRE(rep.a == -2);
        REQUIRE(rep.ord == 5);
        REQUIRE(rep.satisfied);
    }
    SECTION("validation") {
        CurveData E = CurveData::genus1(7, 1, 0);
        REQUIRE_THROWS_AS(trace_condition_report(E, ModulusSpec::split(1, 3, 1, 4)),
                          ValidationError);
        REQUIRE_THROWS_AS(trace_condition_report(E, ModulusSpec::double_point(2, 1)),
                          ValidationError);  // not on the curve
        REQUIRE_THROWS_AS(trace_condition_report(E, ModulusSpec::double_point(0, 0)),
                          ValidationError);  // y = 0
        REQUIRE_THROWS_AS(trace_condition_report(CurveData::genus2(7, {1, 0, 0, 0, 0, 1}),
                                                 ModulusSpec::double_point(0, 1)),
                          ValidationError);
    }
}

TEST_CASE("family sweep y^2 = f(x)(x - t)") {
    SECTION("x^4 - 1 over F_13") {
        ScanReport r = family_sweep(13, {1, 0, 0, 0, -1});
        REQUIRE(summary_value(r, "skipped_t") == "1 5 8 12");  // fourth roots of unity
        REQUIRE(summary_value(r, "swept") == "9");
        REQUIRE(summary_value(r, "all_sidon") == "1");
        REQUIRE(summary_value(r, "all_k23_free") == "1");
        REQUIRE(r.rows.size() == 9);
        std::size_t sid = col_index(r, "is_sidon");
        std::size_t cid = col_index(r, "center_id");
        std::size_t w1c = col_index(r, "w1");
        for (const auto& row : r.rows) {
            REQUIRE(row.at(sid) == "1");
            REQUIRE(row.at(cid) == "1");  // odd-degree model: center is the identity
            double w1 = std::stod(row.at(w1c));
            REQUIRE(w1 > 0.0);
            REQUIRE(w1 < 0.9);
        }
        double mean = std::stod(summary_value(r, "w1_mean"));
        REQUIRE(mean > 0.0);
        REQUIRE(mean < 0.9);
        u64 ram = std::stoull(summary_value(r, "ramanujan_count"));
        REQUIRE(ram <= 9);
    }
    SECTION("disabled analyses leave placeholder cells") {
        FamilyAnalyses an;
        an.spectrum = false;
        an.independence = false;
        ScanReport r = family_sweep(13, {1, 0, 0, 0, -1}, an);
        REQUIRE(summary_value(r, "ramanujan_count") == "-");
        REQUIRE(summary_value(r, "w1_mean") == "-");
        for (const auto& row : r.rows) {
            REQUIRE(row.at(col_index(r, "w1")) == "-");
            REQUIRE(row.at(col_index(r, "indep_lower")) == "-");
            REQUIRE(row.at(col_index(r, "k23_free")) == "1");
        }
    }
    SECTION("validation") {
        REQUIRE_THROWS_AS(family_sweep(13, {1, 0, 0, 0}), ValidationError);
        REQUIRE_THROWS_AS(family_sweep(13, {0, 1, 0, 0, 1}), ValidationError);  // degree < 4
        REQUIRE_THROWS_AS(family_sweep(13, {1, 0, 0, 0, 0}), ValidationError);  // x^4 not squarefree
        REQUIRE_THROWS_AS(family_sweep(12, {1, 0, 0, 0, -1}), ValidationError);
        REQUIRE_THROWS_AS(family_sweep(101, {1, 0, 0, 0, -1}), ValidationError);  // spectrum cap
    }
}
