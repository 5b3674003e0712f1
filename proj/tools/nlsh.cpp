// nlsh: command-line front end for the Swift-Hohenberg lab.
//
// Exit codes: 0 success (verify-bounds: no bound violated), 1 a bound was
// violated, 2 usage or configuration error, 3 the integration blew up.

#include "nlsh/bench.hpp"
#include "nlsh/config.hpp"
#include "nlsh/error.hpp"
#include "nlsh/pipeline.hpp"
#include "nlsh/run_io.hpp"
#include "nlsh/snapshot.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace nlsh;

namespace {

constexpr int kViolated = 1;
constexpr int kUsage = 2;
constexpr int kBlowUp = 3;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Options shared by every config-driven subcommand.
struct ConfigArgs {
    std::string config_path;
    std::vector<std::string> sets;
    std::optional<double> mu;
    std::optional<std::uint64_t> seed;
    std::optional<double> t_end;
    std::string out;

    void attach(CLI::App* app) {
        app->add_option("-c,--config", config_path, "run configuration file")->check(CLI::ExistingFile);
        app->add_option("-s,--set", sets, "override, section.key=value (repeatable)");
        app->add_option("--mu", mu, "shorthand for --set model.mu=...");
        app->add_option("--seed", seed, "shorthand for --set ic.seed=...");
        app->add_option("--t-end", t_end, "shorthand for --set stepper.t_end=...");
        app->add_option("-o,--out", out, "output root (default $SH2D_OUT or ./runs)");
    }

    std::string source() const { return config_path.empty() ? std::string() : read_file(config_path); }

    RunConfig load(const std::vector<std::string>& forced = {}) const {
        std::vector<std::string> all = sets;
        if (mu) all.push_back(fmt::format("model.mu={:.17g}", *mu));
        if (seed) all.push_back(fmt::format("ic.seed={}", *seed));
        if (t_end) all.push_back(fmt::format("stepper.t_end={:.17g}", *t_end));
        all.insert(all.end(), forced.begin(), forced.end());
        return parse_config(source(), all);
    }

    fs::path root(const RunConfig* config = nullptr) const {
        if (!out.empty()) return out;
        if (config && !config->output.directory.empty()) return config->output.directory;
        return default_output_root();
    }
};

void print_reports(const BoundsOutcome& bounds) {
    for (const auto& r : bounds.reports) std::cout << to_key_value(r) << '\n';
}

int finish_run(RunDirectory& dir, const nlohmann::json& summary) {
    const auto manifest = dir.finalize(summary);
    std::cout << "run_dir=" << dir.path().string() << " outputs_hash=" << manifest["outputs_hash"].get<std::string>()
              << '\n';
    return 0;
}

int cmd_simulate(const ConfigArgs& args) {
    const RunConfig config = args.load();
    auto dir = RunDirectory::create(args.root(&config), "simulate", to_text(config));
    if (!args.config_path.empty()) dir.add_input("config_source", args.source());
    const SimulateResult result = run_simulate(config, &dir);
    print_reports(result.bounds);
    finish_run(dir, {{"final_time", result.final_time}, {"violated", result.bounds.any_violated()}});
    if (result.aborted) {
        std::cerr << "error: " << *result.aborted << '\n';
        return kBlowUp;
    }
    return 0;
}

int cmd_lyapunov(const ConfigArgs& args) {
    const RunConfig config = args.load({"analysis.lyapunov=on"});
    auto dir = RunDirectory::create(args.root(&config), "lyapunov", to_text(config));
    if (!args.config_path.empty()) dir.add_input("config_source", args.source());
    const LyapunovResult result = run_lyapunov(config, &dir);
    const auto& r = result.report;
    std::cout << fmt::format("m={} ky_dimension={:.6g} m_insufficient={} lambda_1={:.6g} exponent_sum={:.6g}",
                             r.exponents.size(), r.ky_dimension, r.m_insufficient ? 1 : 0, r.exponents.front(),
                             r.exponent_sum);
    if (r.analytic_threshold) std::cout << fmt::format(" analytic_threshold={:.6g}", *r.analytic_threshold);
    std::cout << '\n';
    return finish_run(dir, {{"ky_dimension", r.ky_dimension}, {"restarts", result.restarts}});
}

int cmd_verify(const ConfigArgs& args, const std::string& run) {
    RunConfig config;
    BoundsOutcome bounds;
    std::optional<RunDirectory> dir;
    if (!run.empty()) {
        const fs::path src(run);
        const std::string config_text = read_file(src / "config.ini");
        const std::string series_text = read_file(src / "series.csv");
        config = parse_config(config_text, args.sets);
        std::vector<TimedField> snapshots;
        if (fs::is_directory(src / "snapshots")) {
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(src / "snapshots")) files.push_back(e.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) {
                Snapshot s = load_snapshot(f);
                snapshots.push_back({s.time, std::move(s.field)});
            }
        }
        bounds = evaluate_bounds(config, parse_series_csv(series_text), snapshots);
        dir.emplace(RunDirectory::create(args.root(&config), "verify-bounds", to_text(config)));
        dir->add_input("config.ini", config_text);
        dir->add_input("series.csv", series_text);
    } else {
        config = args.load();
        dir.emplace(RunDirectory::create(args.root(&config), "verify-bounds", to_text(config)));
        if (!args.config_path.empty()) dir->add_input("config_source", args.source());
        const SimulateResult result = run_simulate(config, &*dir);
        if (result.aborted) {
            std::cerr << "error: " << *result.aborted << '\n';
            dir->finalize({{"aborted", *result.aborted}});
            return kBlowUp;
        }
        bounds = result.bounds;
    }
    if (!run.empty()) {
        dir->write("bounds.txt", bounds_key_value(bounds));
        dir->write("bounds.json", bounds_json(bounds).dump(2) + "\n");
    }
    print_reports(bounds);
    const bool violated = bounds.any_violated();
    finish_run(*dir, {{"violated", violated}});
    std::cout << (violated ? "verify-bounds: VIOLATED\n" : "verify-bounds: ok\n");
    return violated ? kViolated : 0;
}

struct BenchArgs {
    std::string sizes = "8,16,32";
    std::string kernel = "gaussian_floor b=1 a=3 sigma=2";
    std::vector<std::string> strategies;
    int repeats = 5;
    int threads = 0;
    std::string out;
};

int cmd_bench(const BenchArgs& args) {
    std::vector<int> sizes;
    {
        std::istringstream in(args.sizes);
        std::string tok;
        while (std::getline(in, tok, ',')) sizes.push_back(std::stoi(tok));
    }
    std::sort(sizes.begin(), sizes.end());
    std::vector<Strategy> strategies;
    for (const auto& s : args.strategies) strategies.push_back(strategy_from_string(s));
    if (strategies.empty()) {
        strategies = {Strategy::DirectCircular, Strategy::DirectZeroPadded, Strategy::TransformCircular,
                      Strategy::TransformZeroPadded};
        if (args.threads > 0) {
            strategies.push_back(Strategy::DirectCircularThreaded);
            strategies.push_back(Strategy::DirectZeroPaddedThreaded);
        }
    }
    BenchOptions options;
    options.repeats = args.repeats;
    options.threads = std::max(1, args.threads);
    const Kernel kernel = Kernel::parse(args.kernel);

    std::cout << "# wall-clock medians on this machine only; noisy hosts and frequency scaling shift timings\n";
    std::cout << fmt::format("# kernel: {}  repeats: {} (+1 warm-up)  threads(mt): {}\n", kernel.describe(),
                             options.repeats, options.threads);
    const auto results = run_bench(sizes, kernel, strategies, options);
    std::cout << fmt::format("{:<24} {:>6} {:>16} {:>12}\n", "strategy", "n", "median_ns", "max_dev");
    for (const auto& r : results) {
        std::cout << fmt::format("{:<24} {:>6} {:>16.0f} {:>12}\n", to_string(r.strategy), r.n, r.median_ns,
                                 r.max_dev ? fmt::format("{:.3e}", *r.max_dev) : "skipped");
    }
    nlohmann::json slopes;
    for (Strategy s : strategies) {
        if (auto slope = loglog_slope(results, s, sizes.front(), sizes.back())) {
            std::cout << fmt::format("slope {:<24} {:.3f}\n", to_string(s), *slope);
            slopes[std::string(to_string(s))] = *slope;
        }
    }
    const std::string echo = fmt::format("sizes = {}\nkernel = {}\nrepeats = {}\nthreads = {}\n", args.sizes,
                                         args.kernel, args.repeats, options.threads);
    auto dir = RunDirectory::create(args.out.empty() ? default_output_root() : fs::path(args.out), "bench-nonlocal",
                                    echo);
    dir.write("bench.csv", bench_csv(results));
    // Timings differ between runs, so the outputs hash is not reproducible here.
    return finish_run(dir, {{"slopes", slopes}});
}

int cmd_theory(double mu, double a, double b, double C, const std::string& out) {
    const theory::Inputs in{mu, a, b, C};
    const TheoryRow row = theory_row(in);
    std::cout << theory_table(in, row);
    const std::string echo = fmt::format("mu = {:.17g}\na = {:.17g}\nb = {:.17g}\nC = {:.17g}\n", mu, a, b, C);
    auto dir = RunDirectory::create(out.empty() ? default_output_root() : fs::path(out), "theory", echo);
    dir.write("theory.json", to_json(in, row).dump(2) + "\n");
    return finish_run(dir, {});
}

struct CampaignJob {
    std::string config_path;
    std::string status = "pending";
    std::string run_dir;
    std::string outputs_hash;
    int code = 0;
};

int cmd_campaign(const ConfigArgs& base, const std::vector<std::string>& configs, const std::string& command,
                 int jobs) {
    if (command != "simulate" && command != "verify-bounds" && command != "lyapunov") {
        throw InvalidArgument("campaign: --command must be simulate, verify-bounds or lyapunov");
    }
    std::vector<CampaignJob> work(configs.size());
    for (std::size_t k = 0; k < configs.size(); ++k) work[k].config_path = configs[k];
    // Parse everything up front so a typo fails before any run starts.
    for (auto& job : work) {
        ConfigArgs a = base;
        a.config_path = job.config_path;
        (void)a.load(command == "lyapunov" ? std::vector<std::string>{"analysis.lyapunov=on"}
                                           : std::vector<std::string>{});
    }

    std::atomic<std::size_t> next{0};
    std::mutex io;
    auto worker = [&] {
        for (std::size_t k = next++; k < work.size(); k = next++) {
            CampaignJob& job = work[k];
            ConfigArgs a = base;
            a.config_path = job.config_path;
            try {
                RunConfig config = a.load(command == "lyapunov" ? std::vector<std::string>{"analysis.lyapunov=on"}
                                                                : std::vector<std::string>{});
                auto dir = RunDirectory::create(a.root(&config), command, to_text(config));
                dir.add_input("config_source", a.source());
                if (command == "lyapunov") {
                    const auto r = run_lyapunov(config, &dir);
                    job.status = fmt::format("ky={:.6g}", r.report.ky_dimension);
                } else {
                    const auto r = run_simulate(config, &dir);
                    const bool violated = r.bounds.any_violated();
                    job.code = r.aborted ? kBlowUp : (command == "verify-bounds" && violated ? kViolated : 0);
                    job.status = r.aborted ? "blow-up" : (violated ? "violated" : "ok");
                }
                const auto manifest = dir.finalize({{"status", job.status}});
                job.run_dir = dir.path().string();
                job.outputs_hash = manifest["outputs_hash"].get<std::string>();
            } catch (const std::exception& e) {
                job.status = std::string("error: ") + e.what();
                job.code = kUsage;
            }
            std::lock_guard lock(io);
            std::cout << fmt::format("[{}/{}] {} -> {} {}\n", k + 1, work.size(), job.config_path, job.status,
                                     job.run_dir);
        }
    };
    {
        std::vector<std::jthread> pool;
        const int n = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(work.size(), 1)));
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    }

    std::string csv = "config,status,run_dir,outputs_hash\n";
    int code = 0;
    for (const auto& job : work) {
        csv += fmt::format("{},{},{},{}\n", job.config_path, job.status, job.run_dir, job.outputs_hash);
        code = std::max(code, job.code);
    }
    std::string echo = "command = " + command + "\n";
    for (const auto& c : configs) echo += "config = " + c + "\n";
    auto dir = RunDirectory::create(base.out.empty() ? default_output_root() : fs::path(base.out), "campaign", echo);
    dir.write("campaign.csv", csv);
    finish_run(dir, {{"jobs", work.size()}});
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nlsh: nonlocal and local Swift-Hohenberg lab"};
    app.require_subcommand(1);

    ConfigArgs sim_args, lyap_args, verify_args, campaign_args;
    auto* sim = app.add_subcommand("simulate", "integrate a configuration and check the bounds along the way");
    sim_args.attach(sim);

    auto* lyap = app.add_subcommand("lyapunov", "Lyapunov spectrum, Kaplan-Yorke dimension and trace series");
    lyap_args.attach(lyap);

    std::string run;
    auto* verify = app.add_subcommand("verify-bounds", "check the bounds on a finished run (or run one first)");
    verify_args.attach(verify);
    verify->add_option("-r,--run", run, "existing run directory holding config.ini and series.csv")
        ->check(CLI::ExistingDirectory);

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench-nonlocal", "time nonlocal-term evaluation strategies");
    bench->add_option("--sizes", bench_args.sizes, "comma-separated grid sizes per side");
    bench->add_option("--kernel", bench_args.kernel, "kernel spec");
    bench->add_option("--strategy", bench_args.strategies, "strategy name (repeatable)");
    bench->add_option("--repeats", bench_args.repeats, "timed repeats per point")->check(CLI::PositiveNumber);
    bench->add_option("--threads", bench_args.threads, "enable threaded direct strategies with this many threads");
    bench->add_option("-o,--out", bench_args.out, "output root");

    double mu = 0.4, a = 3.0, b = 1.0, C = 1.0;
    std::string theory_out;
    auto* th = app.add_subcommand("theory", "closed-form radius and dimension bounds");
    th->add_option("--mu", mu, "bifurcation parameter")->required();
    th->add_option("--a", a, "sup of the kernel");
    th->add_option("--b", b, "inf of the kernel");
    th->add_option("--C", C, "domain constant of the dimension bound");
    th->add_option("-o,--out", theory_out, "output root");

    std::vector<std::string> configs;
    std::string campaign_command = "simulate";
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    auto* campaign = app.add_subcommand("campaign", "run many configurations in a worker pool");
    campaign->add_option("configs", configs, "configuration files")->required()->check(CLI::ExistingFile);
    campaign->add_option("--command", campaign_command, "simulate | verify-bounds | lyapunov");
    campaign->add_option("-j,--jobs", jobs, "worker threads");
    campaign->add_option("-s,--set", campaign_args.sets, "override applied to every config");
    campaign->add_option("-o,--out", campaign_args.out, "output root");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (lyap->parsed()) return cmd_lyapunov(lyap_args);
        if (verify->parsed()) return cmd_verify(verify_args, run);
        if (bench->parsed()) return cmd_bench(bench_args);
        if (th->parsed()) return cmd_theory(mu, a, b, C, theory_out);
        if (campaign->parsed()) return cmd_campaign(campaign_args, configs, campaign_command, jobs);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const BlowUpError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBlowUp;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
