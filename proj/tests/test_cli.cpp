#include <gtest/gtest.h>

#include "qcurve/cli/job.hpp"

using namespace qcurve;

namespace {

JobResult run_json(const char *text) { return run_job(job_from_text(text, "json")); }

} // namespace

TEST(JobSpec, JsonAndTomlAgree)
{
    const JobSpec a = job_from_text(R"({"command": "toprec", "curve": "airy", "level": 3})", "json");
    const JobSpec b = job_from_text("command = \"toprec\"\ncurve = \"airy\"\nlevel = 3\n", "toml");
    EXPECT_EQ(a.command, b.command);
    EXPECT_EQ(a.level, b.level);
    ASSERT_TRUE(a.curve && b.curve);
    EXPECT_TRUE(a.curve->is_airy() && b.curve->is_airy());
    EXPECT_EQ(run_job(a).report.dump(), run_job(b).report.dump());
}

TEST(JobSpec, Fields)
{
    const JobSpec j = job_from_text(R"({"command": "quantize", "rank": 4, "q_assignments": {"q2": "x", "3": "1/x"}})",
                                    "json");
    EXPECT_EQ(j.rank, 4);
    EXPECT_EQ(j.q_assignments.at(2), "x");
    EXPECT_EQ(j.q_assignments.at(3), "1/x");
    EXPECT_EQ(job_from_text(R"({"command": "wkb", "M": 5})", "json").order, 5);
    EXPECT_EQ(job_from_text(R"({"command": "geometry", "curve": {"q": "x"}})", "json").q, "x");
    const JobSpec explicit_curve = job_from_text("command = \"toprec\"\n[curve]\nx = \"4/t^2\"\ny = \"-2/t\"\n", "toml");
    ASSERT_TRUE(explicit_curve.curve);
    EXPECT_EQ(explicit_curve.curve->y, "-2/t");
}

TEST(JobSpec, MalformedInput)
{
    EXPECT_THROW(job_from_text("{", "json"), std::invalid_argument);
    EXPECT_THROW(job_from_text("command = ", "toml"), std::invalid_argument);
    EXPECT_THROW(job_from_text("[]", "json"), std::invalid_argument);
    EXPECT_THROW(job_from_text(R"({"rank": "three"})", "json"), std::invalid_argument);
    EXPECT_THROW(job_from_text(R"({"q_assignments": {"qx": "1"}})", "json"), std::invalid_argument);
    EXPECT_THROW(job_from_text("{}", "yaml"), std::invalid_argument);
}

TEST(RunJob, QuantizeRankThree)
{
    const auto r = run_json(R"({"command": "quantize", "rank": 3})");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.report["operator"], "(ħ d/dx)^3 - 4*q2*(ħ d/dx) + 4*q3 - 2*ħ*q2'");
    EXPECT_EQ(r.report["semiclassical"], "y^3 - 4*q2*y + 4*q3");
    EXPECT_EQ(r.report["omegas"].size(), 2U);
    EXPECT_TRUE(r.report["round_trip"].get<bool>());
}

TEST(RunJob, QuantizeSubstitution)
{
    const auto r = run_json(R"({"command": "quantize", "rank": 2, "q_assignments": {"q2": "x"}})");
    EXPECT_EQ(r.report["evaluated_coefficients"]["0"], "-x");
}

TEST(RunJob, GeometryAiry)
{
    const auto r = run_json(R"({"command": "geometry", "q": "x"})");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.report["p_g"], 0);
    EXPECT_EQ(r.report["blowups"], 2);
    EXPECT_EQ(r.report["class_at_infinity"], "3/2");
}

TEST(RunJob, CrosscheckAiry)
{
    const auto r = run_json(R"({"command": "crosscheck", "curve": "airy", "M": 4})");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_TRUE(r.report["wkb_equals_toprec"].get<bool>());
    EXPECT_TRUE(r.report["dvv_match"].get<bool>());
}

TEST(RunJob, ToprecIntersectionNumbers)
{
    const auto r = run_json(R"({"command": "toprec", "curve": "airy", "level": 3})");
    EXPECT_EQ(r.report["intersection_numbers"]["g2_d4"], "1/1152");
    EXPECT_EQ(r.report["free_energies"]["(1,1)"], "-1/384*t^3");
    EXPECT_TRUE(r.report["dvv_match"].get<bool>());
}

TEST(RunJob, ExplicitCurveMatchesBuiltin)
{
    const auto a = run_json(R"({"command": "toprec", "curve": "airy", "level": 2})");
    const auto b = run_json(R"({"command": "toprec", "curve": {"x": "4/t^2", "y": "-2/t"}, "level": 2})");
    EXPECT_EQ(a.report["free_energies"], b.report["free_energies"]);
}

TEST(RunJob, WkbBranchFromCurve)
{
    const auto r = run_json(R"({"command": "wkb", "curve": "airy", "order": 2})");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.report["branch"], -1);
    EXPECT_EQ(r.report["rendered"][2], "-5/48*x^(-3/2)");
}

TEST(RunJob, ExitCodes)
{
    EXPECT_EQ(run_json(R"({"command": "geometry", "q": "x^2"})").exit_code, 1);
    EXPECT_EQ(run_json(R"({"command": "quantize"})").exit_code, 1);
    EXPECT_EQ(run_json(R"({"command": "nope"})").exit_code, 1);
    EXPECT_EQ(run_json(R"({"command": "toprec", "curve": {"x": "1/t", "y": "t"}})").exit_code, 1);
    EXPECT_EQ(run_json(R"j({"command": "toprec", "curve": {"x": "4/(t^2+1)", "y": "t"}})j").exit_code, 1);
    EXPECT_EQ(run_json(R"({"command": "wkb", "q": "0"})").report["kind"], "domain_error");
}

TEST(RunJob, Deterministic)
{
    const char *job = R"({"command": "toprec", "curve": "airy", "level": 4})";
    EXPECT_EQ(run_json(job).report.dump(2), run_json(job).report.dump(2));
}

TEST(RunJob, SampleJobsRun)
{
    for (const char *name : {"quantize_r3.json", "scl_r5.toml", "geometry_genus2.toml", "wkb_cubic.toml"}) {
        EXPECT_EQ(run_job(job_from_file(std::string(QCURVE_JOBS_DIR) + "/" + name)).exit_code, 0) << name;
    }
}
