#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <didq/codes.hpp>
#include <didq/distinguish.hpp>
#include <didq/error.hpp>
#include <didq/serialize.hpp>
#include <didq/verify.hpp>

namespace didq::cli {

using json = nlohmann::ordered_json;

namespace {

Provenance provenance(const ExperimentConfig& c)
{
    return Provenance{c.hash, c.seed, kArtifactVersion};
}

json provenance_json(const ExperimentConfig& c)
{
    return json{{"experiment", c.experiment}, {"config_hash", c.hash}, {"seed", c.seed}, {"version", kArtifactVersion}};
}

std::string csv_header(const ExperimentConfig& c)
{
    return "# didq " + std::string(kArtifactVersion) + " experiment=" + c.experiment + " config_hash=" + c.hash +
           " seed=" + std::to_string(c.seed) + "\n";
}

json real(double x)
{
    if (std::isfinite(x)) return x;
    return format_real(x);
}

void write_json(const ExperimentConfig& c, const std::string& name, const json& j)
{
    write_atomic(c.output / name, j.dump(2) + "\n");
}

std::string fmt(double x)
{
    return format_real(x);
}

Grid grid_for(const ExperimentConfig& c, const CqChannel& channel, Metric metric)
{
    return c.grid ? *c.grid : auto_grid(channel, metric, c.schedule.scales().back());
}

json estimate_json(const DimensionEstimate& e)
{
    json slopes = json::array();
    for (double s : e.slopes) slopes.push_back(real(s));
    return json{{"scales", e.scales},   {"counts", e.counts},   {"slopes", slopes},
                {"tail_start", e.tail_start}, {"liminf", real(e.lower)}, {"limsup", real(e.upper)},
                {"flat", e.flat}};
}

DimensionEstimate estimate(const ExperimentConfig& c, const CqChannel& channel, Metric metric, Grid* used = nullptr)
{
    const Grid grid = grid_for(c, channel, metric);
    if (used) *used = grid;
    return minkowski_estimate(PointCloud(channel, grid, metric), c.schedule, DimensionMode::Liminf);
}

AssemblyOptions assembly_options(const ExperimentConfig& c)
{
    AssemblyOptions o;
    o.gv.allow_sampling = c.pipeline.sampling;
    o.gv.seed = c.seed;
    o.gv.sample_trials = c.pipeline.sample_trials;
    o.gv.cap = c.pipeline.enumeration_cap;
    o.enumeration_cap = c.pipeline.enumeration_cap;
    return o;
}

Assembly assemble(const ExperimentConfig& c, std::size_t n)
{
    const CqChannel& ch = c.require_channel();
    const auto& p = c.pipeline;
    if (p.kind == "typical") return assemble_thm4(ch, n, p.alpha, p.t, p.delta_for(n), assembly_options(c));
    return assemble_pure(ch, n, p.gamma, p.t, assembly_options(c));
}

json report_json(const ErrorReport& r)
{
    json j{{"codewords", r.codewords},
           {"lambda1", real(r.lambda1)},
           {"lambda2", real(r.lambda2)},
           {"lambda1_argmax", r.lambda1_argmax}};
    j["lambda2_argmax"] =
        r.lambda2_argmax ? json::array({r.lambda2_argmax->first, r.lambda2_argmax->second}) : json(nullptr);
    return j;
}

json certification_json(const Certification& cert)
{
    return json{{"certified", cert.certified},
                {"required_bits", real(cert.required_bits)},
                {"margin_bits", real(cert.margin_bits)},
                {"pairs", cert.pairs},
                {"uncertified_pairs", cert.uncertified_pairs}};
}

json check_json(const BoundCheck& b)
{
    return json{{"passed", b.passed},
                {"lambda1", real(b.lambda1)},
                {"lambda2", real(b.lambda2)},
                {"bound1", real(b.bound1)},
                {"bound2", real(b.bound2)},
                {"margin1", real(b.margin1)},
                {"margin2", real(b.margin2)},
                {"vacuous1", b.vacuous1},
                {"vacuous2", b.vacuous2}};
}

ComplexMatrix random_density(std::size_t d, std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix a(d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t col = 0; col < d; ++col) a(r, col) = Complex(g(rng), g(rng));
    ComplexMatrix rho = a * a.adjoint();
    const double tr = trace(rho).real();
    return (1.0 / tr) * rho;
}

// Columns of a Haar-random unitary: Gram-Schmidt on a complex Gaussian matrix.
std::vector<std::vector<Complex>> haar_basis(std::size_t d, std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::vector<Complex>> cols(d, std::vector<Complex>(d));
    for (auto& v : cols)
        for (auto& x : v) x = Complex(g(rng), g(rng));
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t m = 0; m < k; ++m) {
            Complex dot = 0.0;
            for (std::size_t i = 0; i < d; ++i) dot += std::conj(cols[m][i]) * cols[k][i];
            for (std::size_t i = 0; i < d; ++i) cols[k][i] -= dot * cols[m][i];
        }
        double norm = 0.0;
        for (const auto& x : cols[k]) norm += std::norm(x);
        norm = std::sqrt(norm);
        for (auto& x : cols[k]) x /= norm;
    }
    return cols;
}

Povm basis_povm(const std::vector<std::vector<Complex>>& basis, std::size_t bins)
{
    const std::size_t d = basis.size();
    std::vector<ComplexMatrix> effects(bins, ComplexMatrix(d));
    for (std::size_t k = 0; k < d; ++k) {
        // contiguous bins of nearly equal size
        const std::size_t b = k * bins / d;
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t col = 0; col < d; ++col) effects[b](r, col) += basis[k][r] * std::conj(basis[k][col]);
    }
    return Povm(std::move(effects));
}

} // namespace

int cmd_dimension(const ExperimentConfig& c, std::ostream& log)
{
    const CqChannel& ch = c.require_channel();
    Grid grid;
    const DimensionEstimate e = estimate(c, ch, c.metric, &grid);

    std::string csv = csv_header(c) + csv_row({"step", "scale", "count", "slope", "in_tail"});
    for (std::size_t k = 0; k < e.scales.size(); ++k) {
        const bool has_slope = k + 1 < e.scales.size();
        csv += csv_row({std::to_string(k), fmt(e.scales[k]), std::to_string(e.counts[k]),
                        has_slope ? fmt(e.slopes[k]) : "", has_slope && k >= e.tail_start ? "1" : "0"});
    }
    write_atomic(c.output / "dimension.csv", csv);

    json j{{"provenance", provenance_json(c)},
           {"channel", ch.describe()},
           {"metric", to_string(c.metric)},
           {"grid", grid.resolution},
           {"schedule",
            {{"delta0", c.schedule.delta0},
             {"ratio", c.schedule.ratio},
             {"steps", c.schedule.steps},
             {"tail_fraction", c.schedule.tail_fraction}}},
           {"estimate", estimate_json(e)}};
    write_json(c, "dimension.json", j);
    log << "dimension: liminf " << fmt(e.lower) << ", limsup " << fmt(e.upper) << (e.flat ? " (flat set)" : "")
        << "\n";
    return kExitOk;
}

int cmd_build(const ExperimentConfig& c, std::ostream& log)
{
    if (c.pipeline.n.empty()) throw ValidationError("pipeline.n: at least one length is required");
    int status = kExitOk;
    json entries = json::array();
    for (std::size_t n : c.pipeline.n) {
        const Assembly a = assemble(c, n);
        const ErrorReport r = measure_errors(a.code, false, c.pipeline.enumeration_cap);
        const std::string code_name = "code_n" + std::to_string(n) + ".json";
        write_atomic(c.output / code_name, code_to_json(a.code, r, provenance(c)));

        json e{{"n", n},
               {"decoder", to_string(a.code.decoder)},
               {"code_file", code_name},
               {"packing_scale", real(a.packing.delta)},
               {"packing_size", a.packing.size()},
               {"min_distance", a.hamming.min_dist},
               {"hamming_size", a.hamming.words.size()},
               {"gv_bound", real(a.hamming.gv_bound)},
               {"sampled", a.hamming.sampled},
               {"codewords", a.code.size()},
               {"measured", report_json(r)},
               {"claimed_lambda1", real(a.claimed_lambda1)},
               {"claimed_lambda2", real(a.claimed_lambda2)},
               {"vacuous", a.vacuous},
               {"feasible", a.feasible()}};
        if (a.binning) {
            e["binning"] = json{{"bin", a.binning->bin}, {"bins", a.binning->bins}, {"bin_sizes", a.binning->bin_sizes}};
        }
        if (a.certification) e["certification"] = certification_json(*a.certification);
        if (a.recheck) {
            e["bound_recheck"] = json{{"pairs_checked", a.recheck->pairs_checked},
                                       {"violations", a.recheck->violations},
                                       {"worst_gap", real(a.recheck->worst_gap)}};
            if (a.recheck->violations > 0) status = kExitCheckFailed;
        }
        if (!a.feasible()) {
            json inf{{"provenance", provenance_json(c)},
                     {"n", n},
                     {"reason", a.infeasibility},
                     {"certification", certification_json(*a.certification)}};
            write_json(c, "infeasibility_n" + std::to_string(n) + ".json", inf);
            if (status == kExitOk) status = kExitInfeasible;
        }
        entries.push_back(e);
        log << "build n=" << n << ": N=" << a.code.size() << " lambda1=" << fmt(r.lambda1)
            << " lambda2=" << fmt(r.lambda2) << (a.feasible() ? "" : " INFEASIBLE: " + a.infeasibility) << "\n";
    }
    json j{{"provenance", provenance_json(c)},
           {"channel", c.require_channel().describe()},
           {"pipeline", c.pipeline.kind},
           {"codes", entries}};
    write_json(c, "build.json", j);
    return status;
}

int cmd_verify(const ExperimentConfig& c, std::ostream& log)
{
    if (c.verify.code.empty()) throw ValidationError("verify.code: path to a code file is required");
    const StoredCode stored = code_from_json(read_file(c.verify.code));
    const DICode& code = stored.code;
    const ErrorReport r = measure_errors(code, c.verify.oracle, c.pipeline.enumeration_cap);

    int status = kExitOk;
    json j{{"provenance", provenance_json(c)}, {"code_provenance", {{"config_hash", stored.provenance.config_hash},
                                                                    {"seed", stored.provenance.seed}}},
           {"decoder", to_string(code.decoder)}, {"n", code.length()}, {"measured", report_json(r)}};

    if (stored.measured) {
        const bool same = std::abs(stored.measured->lambda1 - r.lambda1) <= 1e-12 &&
                          std::abs(stored.measured->lambda2 - r.lambda2) <= 1e-12;
        j["stored_errors_match"] = same;
        if (!same) status = kExitCheckFailed;
    }

    // oracle: full tensors when they fit under the cap
    const double full_dim = std::pow(static_cast<double>(code.channel.output_dim()), static_cast<double>(code.length()));
    if (c.verify.oracle && full_dim <= static_cast<double>(c.cap) && !r.cross.empty()) {
        const ErrorReport o = materialized_errors(code, c.cap);
        double worst = 0.0;
        for (std::size_t i = 0; i < r.cross.size(); ++i) worst = std::max(worst, std::abs(r.cross[i] - o.cross[i]));
        const bool ok = worst <= 1e-10;
        j["oracle"] = json{{"max_abs_diff", real(worst)}, {"agrees", ok}};
        if (!ok) status = kExitCheckFailed;
    } else {
        j["oracle"] = nullptr;
    }

    if (code.decoder == DecoderKind::PureProjector) {
        const BoundCheck b = check_thm5(code, r, code.params.gamma, code.params.t);
        j["check"] = check_json(b);
        j["check"]["kind"] = "pure";
        if (!b.passed) status = kExitCheckFailed;
    } else {
        const Certification cert = certify_premise(code, code.params.delta);
        j["certification"] = certification_json(cert);
        if (!cert.certified) {
            j["check"] = nullptr;
            if (status == kExitOk) status = kExitInfeasible;
        } else {
            const BoundCheck b = check_thm3(code, r, code.params.delta, code.channel.output_dim());
            j["check"] = check_json(b);
            j["check"]["kind"] = "typical";
            if (!b.passed) status = kExitCheckFailed;
        }
    }
    write_json(c, "verify.json", j);
    log << "verify: lambda1=" << fmt(r.lambda1) << " lambda2=" << fmt(r.lambda2) << " status=" << status << "\n";
    return status;
}

int cmd_check_lemma2(const ExperimentConfig& c, std::ostream& log)
{
    const auto& l = c.lemma2;
    const std::size_t d = l.dim;
    std::mt19937_64 rng(c.seed);

    std::string csv = csv_header(c) + csv_row({"pair", "n", "delta", "epsilon", "lhs", "rhs", "margin"});
    std::size_t failures = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t pair = 0; pair < l.pairs; ++pair) {
        const std::size_t n = l.n[rng() % l.n.size()];
        std::vector<double> valid;
        const double delta_max = std::sqrt(static_cast<double>(n)) * std::log2(static_cast<double>(d));
        for (double delta : l.deltas)
            if (delta > 0.0 && delta <= delta_max + 1e-12) valid.push_back(delta);
        if (valid.empty())
            throw ValidationError("lemma2: no delta in range for n=" + std::to_string(n));
        const double delta = valid[rng() % valid.size()];

        std::vector<ComplexMatrix> xa, xb;
        for (std::size_t i = 0; i < n; ++i) xa.push_back(random_density(d, rng));
        for (std::size_t i = 0; i < n; ++i) xb.push_back(random_density(d, rng));
        const ProductState a(xa), b(xb);
        const TypicalProjector pi = typical_projector(a, delta);
        const double lhs = cross_mass(pi, b);
        const double eps = std::clamp(1.0 - product_trace_distance(a, b, c.cap), 0.0, 1.0);
        const double rhs = lemma2_rhs(eps, delta, n, a.entropy(), b.entropy(), d);
        const double margin = rhs - lhs;
        worst = std::min(worst, margin);
        if (margin < -1e-9) ++failures;
        csv += csv_row({std::to_string(pair), std::to_string(n), fmt(delta), fmt(eps), fmt(lhs), fmt(rhs), fmt(margin)});
    }
    write_atomic(c.output / "lemma2.csv", csv);
    log << "check-lemma2: " << l.pairs << " pairs, " << failures << " violations, worst margin " << fmt(worst)
        << "\n";
    return failures == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(const ExperimentConfig& c, std::ostream& log)
{
    if (c.pipeline.n.empty()) throw ValidationError("pipeline.n: at least one length is required");
    for (std::size_t n : c.pipeline.n)
        if (n < 2) throw ValidationError("pipeline.n: sweep lengths must be at least 2 (rate uses log n)");
    const CqChannel& ch = c.require_channel();

    DimensionEstimate dim;
    if (c.dimension) {
        dim.lower = dim.upper = *c.dimension;
    } else {
        dim = estimate(c, ch, Metric::SqrtHs);
    }

    std::string csv = csv_header(c) + csv_row({"n", "packing_size", "codewords", "sampled", "lambda1", "lambda2",
                                               "lambda2_bound", "feasible", "rate", "dimension", "quarter_d", "half_d",
                                               "rate_in_window"});
    for (std::size_t n : c.pipeline.n) {
        const Assembly a = assemble(c, n);
        const ErrorReport r = measure_errors(a.code, false, c.pipeline.enumeration_cap);
        const RateReport rate = rate_report(a.code, dim);
        const bool in_window = rate.rate > 0.0 && rate.rate <= rate.upper_target;
        csv += csv_row({std::to_string(n), std::to_string(a.packing.size()), std::to_string(a.code.size()),
                        a.hamming.sampled ? "1" : "0", fmt(r.lambda1), fmt(r.lambda2), fmt(a.claimed_lambda2),
                        a.feasible() ? "1" : "0", fmt(rate.rate), fmt(rate.dimension), fmt(rate.lower_target),
                        fmt(rate.upper_target), in_window ? "1" : "0"});
        log << "sweep n=" << n << ": N=" << a.code.size() << " rate=" << fmt(rate.rate) << "\n";
    }
    write_atomic(c.output / "sweep.csv", csv);
    return kExitOk;
}

int cmd_sim_compare(const ExperimentConfig& c, std::ostream& log)
{
    const CqChannel& ch = c.require_channel();
    const std::size_t d = ch.output_dim();
    const DimensionEstimate quantum = estimate(c, ch, Metric::SqrtHs);

    std::vector<std::pair<std::string, Povm>> povms;
    povms.emplace_back("trivial", Povm::trivial(d));
    povms.emplace_back("computational", Povm::computational_basis(d));
    std::mt19937_64 rng(c.seed);
    for (std::size_t i = 0; i < c.sim.povms; ++i) {
        const auto basis = haar_basis(d, rng);
        povms.emplace_back("haar_" + std::to_string(i), basis_povm(basis, d));
        for (std::size_t bins : c.sim.bins)
            if (bins >= 1 && bins < d)
                povms.emplace_back("haar_" + std::to_string(i) + "_bins" + std::to_string(bins), basis_povm(basis, bins));
    }

    std::string csv = csv_header(c) + csv_row({"povm", "outcomes", "classical_lower", "classical_upper",
                                               "quantum_lower", "gap", "label"});
    double max_classical = -std::numeric_limits<double>::infinity();
    double max_gap = -std::numeric_limits<double>::infinity();
    for (const auto& [name, povm] : povms) {
        const CqChannel measured = ch.measured(povm);
        const DimensionEstimate e = estimate(c, measured, Metric::SqrtHs);
        const double gap = e.lower - quantum.lower;
        max_classical = std::max(max_classical, e.lower);
        max_gap = std::max(max_gap, gap);
        csv += csv_row({name, std::to_string(povm.outcomes()), fmt(e.lower), fmt(e.upper), fmt(quantum.lower),
                        fmt(gap), "HEURISTIC"});
    }
    csv += csv_row({"max", "", fmt(max_classical), "", fmt(quantum.lower), fmt(max_gap), "HEURISTIC"});
    write_atomic(c.output / "sim_compare.csv", csv);
    log << "sim-compare (HEURISTIC): quantum " << fmt(quantum.lower) << ", max classical " << fmt(max_classical)
        << "\n";
    return kExitOk;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"didq: deterministic identification codes over classical-quantum channels"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::size_t> cap;

    using Command = int (*)(const ExperimentConfig&, std::ostream&);
    const std::vector<std::pair<std::string, Command>> commands = {
        {"dimension", cmd_dimension}, {"build", cmd_build},         {"verify", cmd_verify},
        {"check-lemma2", cmd_check_lemma2}, {"sweep", cmd_sweep}, {"sim-compare", cmd_sim_compare},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--cap", cap, "materialization cap (matrix dimension)");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        Overrides o;
        o.seed = seed;
        if (out_dir) o.output = *out_dir;
        o.cap = cap;
        const ExperimentConfig config = load_config(config_path, o);
        for (std::size_t i = 0; i < subs.size(); ++i)
            if (subs[i]->parsed()) return commands[i].second(config, out);
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const CapExceeded& e) {
        err << "cap exceeded: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitCheckFailed;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "file error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}

} // namespace didq::cli
