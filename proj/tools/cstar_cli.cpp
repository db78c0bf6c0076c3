// Command-line front end: property experiments, RKHM regression, net
// training and measure optimization, with JSON reports.  Exit codes: 0 the
// run passed, 1 a property or fit check failed, 2 usage or input error.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cstar/experiments/experiments.hpp"
#include "cstar/io/dataset.hpp"
#include "cstar/net/autodiff.hpp"
#include "cstar/net/serialize.hpp"

namespace fs = std::filesystem;
using namespace cstar;

namespace {

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("CSTAR_LOG");
        return env ? std::atoi(env) : 0;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[cstar] " << msg << "\n";
}

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = ".";
    int64_t seed = -1;
    int threads = 1;
    Json config = Json::object();

    bool seed_given = false;
    bool out_given = false;
    bool threads_given = false;

    void finalize() {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw IoError("cannot open config \"" + config_path + "\"");
            try {
                in >> config;
            } catch (const Json::exception& e) {
                throw IoError(std::string("invalid config JSON: ") + e.what());
            }
        }
        // Flags override config values.
        if (!seed_given && config.contains("seed")) seed = config["seed"].get<int64_t>();
        if (!out_given && config.contains("out")) out_dir = config["out"].get<std::string>();
        if (!threads_given && config.contains("threads"))
            threads = config["threads"].get<int>();
        if (seed < 0)
            throw InvalidArgument("a nonnegative --seed is required (no wall-clock default)");
        if (threads < 1) throw InvalidArgument("--threads must be >= 1");
        fs::create_directories(out_dir);
    }

    uint64_t seed_value() const { return static_cast<uint64_t>(seed); }

    /// Config fallback for a per-command value the flag did not set.
    template <typename T>
    void fallback(const CLI::App& cmd, const std::string& flag, const std::string& key,
                  T& value) const {
        if (cmd.count(flag) == 0 && config.contains(key)) value = config[key].get<T>();
    }
};

void write_report(const GlobalOptions& g, const experiments::ExperimentReport& report,
                  const std::string& filename) {
    const fs::path path = fs::path(g.out_dir) / filename;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write \"" + path.string() + "\"");
    out << report.to_json().dump(2) << "\n";

    // Companion metric table for external plotting.
    fs::path csv = path;
    csv.replace_extension();
    const std::string stem = csv.filename().string();
    csv.replace_filename(stem + "_metrics.csv");
    std::ofstream table(csv);
    table << "metric,value\n";
    table.precision(17);
    for (const auto& [name, value] : report.metrics) table << name << "," << value << "\n";

    log_info("report " + path.string() + " written in " +
             std::to_string(report.wall_ms) + " ms");
    std::cout << (report.pass ? "PASS " : "FAIL ") << report.id << " -> " << path.string()
              << "\n";
}

void write_json_file(const fs::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write \"" + path.string() + "\"");
    out << j.dump(2) << "\n";
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open \"" + path + "\"");
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw IoError(std::string("invalid JSON in \"") + path + "\": " + e.what());
    }
    return j;
}

rkhm::AKernel kernel_from_flags(const std::string& kernel_path, double gamma,
                                const DescriptorPtr& desc, int input_dim) {
    if (!kernel_path.empty()) return rkhm::kernel_from_json(read_json_file(kernel_path));
    return rkhm::AKernel::gaussian(desc, input_dim, gamma);
}

net::NetDataset to_net_dataset(const io::Dataset& data) {
    net::NetDataset out;
    for (int t = 0; t < data.size(); ++t) {
        std::vector<AlgebraElement> in;
        for (int k = 0; k < data.input_dim; ++k)
            in.push_back(AlgebraElement::from_scalar(data.descriptor,
                                                     Complex(data.inputs[t][k], 0.0)));
        out.inputs.emplace_back(std::move(in));
        out.targets.push_back(data.outputs[static_cast<size_t>(t)]);
    }
    return out;
}

std::vector<int> parse_widths(const std::string& spec) {
    std::vector<int> widths;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) widths.push_back(std::stoi(tok));
    if (widths.size() < 2)
        throw InvalidArgument("--widths needs >= 2 comma-separated integers");
    return widths;
}

rkhm::DiscreteAMeasure measure_from_json(const Json& j, const DescriptorPtr& desc) {
    std::vector<Eigen::VectorXd> pts;
    for (const auto& pj : j.at("points")) {
        auto v = pj.get<std::vector<double>>();
        pts.push_back(
            Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size())));
    }
    std::vector<AlgebraElement> w;
    for (const auto& wj : j.at("weights")) w.push_back(element_from_json(desc, wj));
    return rkhm::DiscreteAMeasure(std::move(pts), std::move(w));
}

// ---------------------------------------------------------------------------
// Subcommand handlers.  Each returns the process exit code.

int cmd_algebra_check(const GlobalOptions& g, const CLI::App& cmd, int trials) {
    g.fallback(cmd, "--trials", "trials", trials);
    auto report = experiments::run_algebra_check(trials, g.seed_value());
    write_report(g, report, "algebra_check_report.json");
    return report.pass ? 0 : 1;
}

int cmd_rkhm_fit(const GlobalOptions& g, const CLI::App& cmd, std::string data_path,
                 std::string kernel_path, double gamma, double lambda, double test_fraction,
                 bool interpolate) {
    g.fallback(cmd, "--data", "data", data_path);
    g.fallback(cmd, "--kernel", "kernel", kernel_path);
    g.fallback(cmd, "--gamma", "gamma", gamma);
    g.fallback(cmd, "--lambda", "lambda", lambda);
    g.fallback(cmd, "--test-fraction", "test-fraction", test_fraction);
    io::Dataset data = io::load_dataset(data_path);
    rkhm::AKernel kernel =
        kernel_from_flags(kernel_path, gamma, data.descriptor, data.input_dim);
    require_same_descriptor(kernel.descriptor(), data.descriptor, "rkhm-fit");

    auto x = data.inputs;
    auto y = data.scalar_outputs();
    auto report = experiments::run_rkhm_regression(x, y, kernel, lambda, test_fraction,
                                                   g.seed_value(), interpolate);

    // Persist the regressor fitted on the full dataset.
    rkhm::RkhmRegressor reg = rkhm::fit_krr(kernel, x, y, lambda, interpolate, g.threads);
    write_json_file(fs::path(g.out_dir) / "regressor.json", rkhm::to_json(reg));
    write_report(g, report, "rkhm_fit_report.json");
    return report.pass ? 0 : 1;
}

int cmd_rkhm_predict(const GlobalOptions& g, const CLI::App& cmd, std::string model_path,
                     std::string data_path) {
    g.fallback(cmd, "--model", "model", model_path);
    g.fallback(cmd, "--data", "data", data_path);
    if (model_path.empty() || data_path.empty())
        throw InvalidArgument("rkhm-predict needs --model and --data");
    rkhm::RkhmRegressor reg = rkhm::regressor_from_json(read_json_file(model_path));
    io::Dataset data = io::load_dataset(data_path, reg.kernel().descriptor());

    Json predictions = Json::array();
    double err_acc = 0.0;
    for (int t = 0; t < data.size(); ++t) {
        AlgebraElement yhat = reg.predict(data.inputs[static_cast<size_t>(t)]);
        predictions.push_back(to_json(yhat));
        err_acc += norm(sub(yhat, data.outputs[static_cast<size_t>(t)][0]));
    }
    write_json_file(fs::path(g.out_dir) / "predictions.json",
                    Json{{"predictions", predictions}});

    experiments::ExperimentReport report;
    report.id = "rkhm-predict";
    report.seed = g.seed_value();
    report.parameters["n"] = data.size();
    report.metrics["mean_error"] = err_acc / data.size();
    report.pass = std::isfinite(err_acc);
    write_report(g, report, "rkhm_predict_report.json");
    return report.pass ? 0 : 1;
}

int cmd_mmd(const GlobalOptions& g, const CLI::App& cmd, std::string kernel_path,
            std::string measure_a, std::string measure_b) {
    g.fallback(cmd, "--kernel", "kernel", kernel_path);
    g.fallback(cmd, "--measure-a", "measure-a", measure_a);
    g.fallback(cmd, "--measure-b", "measure-b", measure_b);
    if (kernel_path.empty() || measure_a.empty() || measure_b.empty())
        throw InvalidArgument("mmd needs --kernel, --measure-a and --measure-b");
    rkhm::AKernel kernel = rkhm::kernel_from_json(read_json_file(kernel_path));
    rkhm::DiscreteAMeasure mu =
        measure_from_json(read_json_file(measure_a), kernel.descriptor());
    rkhm::DiscreteAMeasure nu =
        measure_from_json(read_json_file(measure_b), kernel.descriptor());
    rkhm::MmdResult r = rkhm::mmd(kernel, mu, nu);

    experiments::ExperimentReport report;
    report.id = "mmd";
    report.seed = g.seed_value();
    report.parameters["support_a"] = mu.points.size();
    report.parameters["support_b"] = nu.points.size();
    report.metrics["mmd_squared_norm"] = r.value;
    report.metrics["squared_is_positive"] = is_positive(r.squared, 1e-8) ? 1.0 : 0.0;
    report.pass = report.metrics["squared_is_positive"] == 1.0;
    write_json_file(fs::path(g.out_dir) / "mmd_squared.json", to_json(r.squared));
    write_report(g, report, "mmd_report.json");
    return report.pass ? 0 : 1;
}

int cmd_net_train(const GlobalOptions& g, const CLI::App& cmd, std::string data_path,
                  std::string widths_spec, std::string activation, double slope, int steps,
                  double lr) {
    g.fallback(cmd, "--data", "data", data_path);
    g.fallback(cmd, "--widths", "widths", widths_spec);
    g.fallback(cmd, "--activation", "activation", activation);
    g.fallback(cmd, "--slope", "slope", slope);
    g.fallback(cmd, "--steps", "steps", steps);
    g.fallback(cmd, "--lr", "lr", lr);
    io::Dataset data = io::load_dataset(data_path);
    net::NetDataset nd = to_net_dataset(data);

    std::vector<int> widths = parse_widths(widths_spec);
    if (widths.front() != data.input_dim || widths.back() != data.output_width())
        throw InvalidArgument("--widths must start at the input dim and end at the output width");

    Rng rng(g.seed_value());
    net::ActivationSpec act{net::activation_from_name(activation), slope};
    net::CStarNet model = net::random_net(data.descriptor, widths, act, rng);
    write_json_file(fs::path(g.out_dir) / "model_init.json", net::to_json(model));

    net::TrainResult r = net::train(model, nd, {steps, lr});
    write_json_file(fs::path(g.out_dir) / "model.json", net::to_json(model));

    {
        std::ofstream trace(fs::path(g.out_dir) / "loss_trace.csv");
        trace << "step,loss\n";
        trace.precision(17);
        for (size_t s = 0; s < r.loss_trace.size(); ++s)
            trace << s << "," << r.loss_trace[s] << "\n";
    }

    experiments::ExperimentReport report;
    report.id = "net-train";
    report.seed = g.seed_value();
    report.parameters["widths"] = widths;
    report.parameters["steps"] = steps;
    report.parameters["lr"] = lr;
    report.parameters["activation"] = activation;
    report.metrics["initial_loss"] = r.loss_trace.front();
    report.metrics["final_loss"] = r.loss_trace.back();
    report.metrics["diverged"] = r.diverged ? 1.0 : 0.0;
    report.pass = !r.diverged;
    write_report(g, report, "net_train_report.json");
    return report.pass ? 0 : 1;
}

int cmd_net_eval(const GlobalOptions& g, const CLI::App& cmd, std::string model_path,
                 std::string data_path) {
    g.fallback(cmd, "--model", "model", model_path);
    g.fallback(cmd, "--data", "data", data_path);
    if (model_path.empty() || data_path.empty())
        throw InvalidArgument("net-eval needs --model and --data");
    net::CStarNet model = net::net_from_json(read_json_file(model_path));
    io::Dataset data = io::load_dataset(data_path, model.descriptor());
    net::NetDataset nd = to_net_dataset(data);
    const double loss = net::dataset_loss(model, nd);

    experiments::ExperimentReport report;
    report.id = "net-eval";
    report.seed = g.seed_value();
    report.parameters["n"] = data.size();
    report.metrics["loss"] = loss;
    report.pass = std::isfinite(loss);
    write_report(g, report, "net_eval_report.json");
    return report.pass ? 0 : 1;
}

int cmd_measure_opt(const GlobalOptions& g, const CLI::App& cmd, std::string model_path,
                    std::string data_path, int steps) {
    g.fallback(cmd, "--model", "model", model_path);
    g.fallback(cmd, "--data", "data", data_path);
    g.fallback(cmd, "--steps", "steps", steps);
    if (model_path.empty() || data_path.empty())
        throw InvalidArgument("measure-opt needs --model and --data");
    net::CStarNet model = net::net_from_json(read_json_file(model_path));
    if (model.descriptor()->kind() != AlgebraKind::GridFunction)
        throw InvalidArgument("measure-opt requires a grid-function model");
    io::Dataset data = io::load_dataset(data_path, AlgebraDescriptor::scalar());

    std::vector<Eigen::VectorXcd> inputs, targets;
    for (int t = 0; t < data.size(); ++t) {
        inputs.push_back(data.inputs[static_cast<size_t>(t)].cast<Complex>());
        Eigen::VectorXcd y(data.output_width());
        for (int k = 0; k < data.output_width(); ++k)
            y[k] = data.outputs[static_cast<size_t>(t)][k].coords()[0];
        targets.push_back(std::move(y));
    }

    std::vector<int> support(static_cast<size_t>(model.descriptor()->grid_size()));
    std::iota(support.begin(), support.end(), 0);
    auto p0 = net::ProbabilityWeights::uniform(support);
    net::MeasureOptResult r = net::optimize_measure(model, inputs, targets, p0, steps);

    Json weights;
    weights["support"] = r.weights.support;
    weights["p"] = std::vector<double>(r.weights.p.data(),
                                       r.weights.p.data() + r.weights.p.size());
    write_json_file(fs::path(g.out_dir) / "measure_weights.json", weights);

    experiments::ExperimentReport report;
    report.id = "measure-opt";
    report.seed = g.seed_value();
    report.parameters["steps"] = steps;
    report.parameters["support_size"] = support.size();
    report.metrics["initial_objective"] = r.initial;
    report.metrics["final_objective"] = r.final;
    report.metrics["simplex_sum"] = r.weights.p.sum();
    report.pass = r.final <= r.initial && std::abs(r.weights.p.sum() - 1.0) <= 1e-12 &&
                  r.weights.p.minCoeff() >= 0.0;
    write_report(g, report, "measure_opt_report.json");
    return report.pass ? 0 : 1;
}

int cmd_prop_poly(const GlobalOptions& g, const CLI::App& cmd, int L, int m) {
    g.fallback(cmd, "--L", "L", L);
    g.fallback(cmd, "--m", "m", m);
    auto report = experiments::run_expressiveness(L, m, g.seed_value());
    write_report(g, report, "prop_poly_report.json");
    return report.pass ? 0 : 1;
}

int cmd_prop_convex(const GlobalOptions& g, const CLI::App& cmd, int segments) {
    g.fallback(cmd, "--segments", "segments", segments);
    auto report = experiments::run_convexity(g.seed_value(), segments);
    write_report(g, report, "prop_convex_report.json");
    return report.pass ? 0 : 1;
}

int cmd_norm_compare(const GlobalOptions& g, const CLI::App& cmd, int trials) {
    g.fallback(cmd, "--trials", "trials", trials);
    auto report = experiments::run_norm_comparison(trials, g.seed_value());
    write_report(g, report, "norm_compare_report.json");
    return report.pass ? 0 : 1;
}

int cmd_equivariance(const GlobalOptions& g, const CLI::App& cmd, std::string group,
                     int layers, int trials) {
    g.fallback(cmd, "--group", "group", group);
    g.fallback(cmd, "--layers", "layers", layers);
    g.fallback(cmd, "--trials", "trials", trials);
    GroupTable table = [&] {
        if (group == "s3") return GroupTable::symmetric3();
        if (group.size() > 1 && group[0] == 'z')
            return GroupTable::cyclic(std::stoi(group.substr(1)));
        throw InvalidArgument("--group must be s3 or z<n>");
    }();
    auto report = experiments::run_equivariance(table, layers, trials, g.seed_value());
    write_report(g, report, "equivariance_report.json");
    return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"C*-algebraic machine learning toolkit"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--config", g.config_path, "JSON config file (flags override it)");
    auto* seed_opt = app.add_option("--seed", g.seed, "random seed (mandatory)");
    auto* out_opt = app.add_option("--out", g.out_dir, "output directory");
    auto* threads_opt = app.add_option("--threads", g.threads, "worker threads");

    // algebra-check
    int ac_trials = 100;
    auto* ac = app.add_subcommand("algebra-check", "C*-axiom property suite");
    ac->add_option("--trials", ac_trials, "random elements per kind");

    // rkhm-fit
    std::string rf_data, rf_kernel;
    double rf_gamma = 1.0, rf_lambda = 0.1, rf_test_fraction = 0.25;
    bool rf_interpolate = false;
    auto* rf = app.add_subcommand("rkhm-fit", "kernel ridge regression over an RKHM");
    rf->add_option("--data", rf_data, "dataset file (csv or json)");
    rf->add_option("--kernel", rf_kernel, "kernel spec JSON file");
    rf->add_option("--gamma", rf_gamma, "Gaussian width when no kernel file is given");
    rf->add_option("--lambda", rf_lambda, "ridge parameter (> 0)");
    rf->add_option("--test-fraction", rf_test_fraction, "held-out fraction");
    rf->add_flag("--interpolate", rf_interpolate, "allow lambda = 0 via pseudo-inverse");

    // rkhm-predict
    std::string rp_model, rp_data;
    auto* rp = app.add_subcommand("rkhm-predict", "evaluate a fitted regressor");
    rp->add_option("--model", rp_model, "regressor JSON");
    rp->add_option("--data", rp_data, "dataset file");

    // mmd
    std::string mm_kernel, mm_a, mm_b;
    auto* mm = app.add_subcommand("mmd", "MMD between two A-valued measures");
    mm->add_option("--kernel", mm_kernel, "kernel spec JSON");
    mm->add_option("--measure-a", mm_a, "measure JSON");
    mm->add_option("--measure-b", mm_b, "measure JSON");

    // net-train
    std::string nt_data, nt_widths = "1,1", nt_activation = "tanh";
    double nt_slope = 1.0, nt_lr = 0.05;
    int nt_steps = 100;
    auto* nt = app.add_subcommand("net-train", "train a C*-algebra net");
    nt->add_option("--data", nt_data, "dataset file");
    nt->add_option("--widths", nt_widths, "comma-separated layer widths");
    nt->add_option("--activation", nt_activation, "identity|linear|relu|tanh");
    nt->add_option("--slope", nt_slope, "slope for the linear activation");
    nt->add_option("--steps", nt_steps, "gradient steps");
    nt->add_option("--lr", nt_lr, "learning rate");

    // net-eval
    std::string ne_model, ne_data;
    auto* ne = app.add_subcommand("net-eval", "evaluate a net on a dataset");
    ne->add_option("--model", ne_model, "model JSON");
    ne->add_option("--data", ne_data, "dataset file");

    // measure-opt
    std::string mo_model, mo_data;
    int mo_steps = 500;
    auto* mo = app.add_subcommand("measure-opt",
                                  "convex measure optimization of an averaged net");
    mo->add_option("--model", mo_model, "grid net model JSON");
    mo->add_option("--data", mo_data, "dataset file");
    mo->add_option("--steps", mo_steps, "mirror descent steps");

    // prop-poly
    int pp_L = 2, pp_m = 2;
    auto* pp = app.add_subcommand("prop-poly", "slice polynomial-degree property");
    pp->add_option("--L", pp_L, "depth");
    pp->add_option("--m", pp_m, "basis size");

    // prop-convex
    int pc_segments = 200;
    auto* pc = app.add_subcommand("prop-convex", "convexity of the averaged-net loss");
    pc->add_option("--segments", pc_segments, "sampled simplex segments");

    // norm-compare
    int nc_trials = 1000;
    auto* nc = app.add_subcommand("norm-compare", "operator vs Hilbert-Schmidt norms");
    nc->add_option("--trials", nc_trials, "matrices per dimension");

    // equivariance
    std::string eq_group = "s3";
    int eq_layers = 2, eq_trials = 10;
    auto* eq = app.add_subcommand("equivariance", "group net translation equivariance");
    eq->add_option("--group", eq_group, "s3 or z<n>");
    eq->add_option("--layers", eq_layers, "layer count");
    eq->add_option("--trials", eq_trials, "random inputs");

    // Global flags remain usable after the subcommand name.
    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help() << "\n";
        return 2;
    }

    try {
        g.seed_given = seed_opt->count() > 0;
        g.out_given = out_opt->count() > 0;
        g.threads_given = threads_opt->count() > 0;
        g.finalize();

        if (ac->parsed()) return cmd_algebra_check(g, *ac, ac_trials);
        if (rf->parsed())
            return cmd_rkhm_fit(g, *rf, rf_data, rf_kernel, rf_gamma, rf_lambda,
                                rf_test_fraction, rf_interpolate);
        if (rp->parsed()) return cmd_rkhm_predict(g, *rp, rp_model, rp_data);
        if (mm->parsed()) return cmd_mmd(g, *mm, mm_kernel, mm_a, mm_b);
        if (nt->parsed())
            return cmd_net_train(g, *nt, nt_data, nt_widths, nt_activation, nt_slope,
                                 nt_steps, nt_lr);
        if (ne->parsed()) return cmd_net_eval(g, *ne, ne_model, ne_data);
        if (mo->parsed()) return cmd_measure_opt(g, *mo, mo_model, mo_data, mo_steps);
        if (pp->parsed()) return cmd_prop_poly(g, *pp, pp_L, pp_m);
        if (pc->parsed()) return cmd_prop_convex(g, *pc, pc_segments);
        if (nc->parsed()) return cmd_norm_compare(g, *nc, nc_trials);
        if (eq->parsed()) return cmd_equivariance(g, *eq, eq_group, eq_layers, eq_trials);
        std::cerr << app.help() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
