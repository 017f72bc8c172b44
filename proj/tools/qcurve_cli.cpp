#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qcurve/cli/job.hpp"

namespace {

int usage_error(const CLI::App &app, const std::string &message)
{
    std::cerr << "error: " << message << "\n\n" << app.help();
    return 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"qcurve: quantum curves, topological recursion and WKB for Hitchin spectral curves"};
    std::string command;
    std::string job_path;
    std::string format;
    std::string out_path;
    std::optional<int> rank;
    std::optional<int> level;
    std::optional<int> order;
    std::optional<int> branch;
    std::optional<int> truncation;
    std::optional<std::string> q;
    std::optional<std::string> curve;
    std::optional<std::string> x;
    std::optional<std::string> y;

    app.add_option("command", command, "quantize | scl | geometry | toprec | wkb | crosscheck")
        ->check(CLI::IsMember(qcurve::job_commands()));
    app.add_option("--job", job_path, "job file (JSON or TOML)")->check(CLI::ExistingFile);
    app.add_option("--format", format, "job file format")->check(CLI::IsMember({"json", "toml"}));
    app.add_option("--out", out_path, "write the report here instead of stdout");
    app.add_option("--rank", rank, "rank r of the Higgs bundle");
    app.add_option("--level", level, "toprec level bound 2g-2+n");
    app.add_option("--order", order, "WKB order M");
    app.add_option("--q", q, "potential q(x) as a rational function string");
    app.add_option("--curve", curve, "builtin spectral curve (airy)");
    app.add_option("--x", x, "x(t) of an explicit spectral curve");
    app.add_option("--y", y, "y(t) of an explicit spectral curve");
    app.add_option("--branch", branch, "WKB branch, +1 or -1");
    app.add_option("--truncation", truncation, "truncation order of q");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return usage_error(app, e.what());
    }

    qcurve::JobSpec job;
    try {
        if (!job_path.empty()) {
            job = qcurve::job_from_file(job_path, format);
        }
    } catch (const std::invalid_argument &e) {
        return usage_error(app, e.what());
    }
    if (!command.empty()) {
        job.command = command;
    }
    if (job.command.empty()) {
        return usage_error(app, "no command given");
    }
    if (rank) {
        job.rank = rank;
    }
    if (level) {
        job.level = level;
    }
    if (order) {
        job.order = order;
    }
    if (branch) {
        job.branch = branch;
    }
    if (truncation) {
        job.truncation = truncation;
    }
    if (q) {
        job.q = q;
    }
    if (curve) {
        job.curve = qcurve::CurveSpec{*curve, {}, {}};
    }
    if (x || y) {
        if (!x || !y) {
            return usage_error(app, "--x and --y go together");
        }
        job.curve = qcurve::CurveSpec{{}, *x, *y};
    }

    const qcurve::JobResult result = qcurve::run_job(job);
    // nlohmann::json objects keep keys sorted
    const std::string text = result.report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            return usage_error(app, "cannot write " + out_path);
        }
        out << text;
    }
    if (result.exit_code != 0 && result.report.contains("error")) {
        std::cerr << "error: " << result.report["error"].get<std::string>() << "\n";
    }
    return result.exit_code;
}
