#include "config.hpp"

#include <cmath>

#include <json.hpp>

#include <didq/error.hpp>
#include <didq/serialize.hpp>

namespace didq::cli {

using json = nlohmann::json;

namespace {

void allow_only(const json& j, std::initializer_list<const char*> keys, const std::string& where)
{
    if (!j.is_object()) throw ValidationError(where + ": expected an object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : keys) ok = ok || item.key() == k;
        if (!ok) throw ValidationError(where + ": unknown key '" + item.key() + "'");
    }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where)
{
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(where + "." + key + ": wrong type");
    }
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out, const std::string& where)
{
    if (!j.contains(key) || j.at(key).is_null()) return;
    T v{};
    read(j, key, v, where);
    out = v;
}

CqChannel channel_from_config(const json& j, const std::filesystem::path& base)
{
    if (!j.is_object()) throw ValidationError("channel: expected an object");
    if (j.contains("file")) {
        allow_only(j, {"file"}, "channel");
        std::filesystem::path p = j.at("file").get<std::string>();
        if (p.is_relative()) p = base / p;
        return channel_from_json(read_file(p));
    }
    return channel_from_json(j.dump());
}

} // namespace

double PipelineConfig::delta_for(std::size_t length) const
{
    return delta ? *delta : std::sqrt(static_cast<double>(length)) / 2.0;
}

const CqChannel& ExperimentConfig::require_channel() const
{
    if (!channel) throw ValidationError("config: this command needs a 'channel'");
    return *channel;
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                              const Overrides& overrides)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: invalid JSON: ") + e.what());
    }
    allow_only(j,
               {"experiment", "seed", "channel", "geometry", "pipeline", "lemma2", "verify", "sim_compare",
                "dimension", "output", "cap"},
               "config");

    ExperimentConfig c;
    read(j, "experiment", c.experiment, "config");
    read(j, "seed", c.seed, "config");
    read(j, "dimension", c.dimension, "config");
    std::string output = c.output.string();
    read(j, "output", output, "config");
    c.output = output;
    read(j, "cap", c.cap, "config");

    if (j.contains("channel")) c.channel = channel_from_config(j.at("channel"), base_dir);

    if (j.contains("geometry")) {
        const json& g = j.at("geometry");
        allow_only(g, {"metric", "grid", "schedule"}, "geometry");
        std::string metric = to_string(c.metric);
        read(g, "metric", metric, "geometry");
        c.metric = metric_from_string(metric);
        if (g.contains("grid")) {
            std::vector<std::size_t> res;
            read(g, "grid", res, "geometry");
            c.grid = Grid{res};
        }
        if (g.contains("schedule")) {
            const json& s = g.at("schedule");
            allow_only(s, {"delta0", "ratio", "steps", "tail_fraction"}, "geometry.schedule");
            read(s, "delta0", c.schedule.delta0, "geometry.schedule");
            read(s, "ratio", c.schedule.ratio, "geometry.schedule");
            read(s, "steps", c.schedule.steps, "geometry.schedule");
            read(s, "tail_fraction", c.schedule.tail_fraction, "geometry.schedule");
        }
    }

    if (j.contains("pipeline")) {
        const json& p = j.at("pipeline");
        const std::string w = "pipeline";
        allow_only(p, {"kind", "n", "alpha", "t", "delta", "gamma", "sampling", "sample_trials", "enumeration_cap"}, w);
        auto& pc = c.pipeline;
        read(p, "kind", pc.kind, w);
        read(p, "n", pc.n, w);
        read(p, "alpha", pc.alpha, w);
        read(p, "t", pc.t, w);
        read(p, "delta", pc.delta, w);
        read(p, "gamma", pc.gamma, w);
        read(p, "sampling", pc.sampling, w);
        read(p, "sample_trials", pc.sample_trials, w);
        read(p, "enumeration_cap", pc.enumeration_cap, w);
        if (pc.kind != "pure" && pc.kind != "typical")
            throw ValidationError("pipeline.kind: expected 'pure' or 'typical'");
        if (pc.kind == "typical" && !(pc.alpha > 0.0 && pc.alpha <= 0.25))
            throw ValidationError("pipeline.alpha: must lie in (0, 1/4]");
        if (pc.kind == "pure" && !(pc.gamma > 0.0 && pc.gamma < 1.0))
            throw ValidationError("pipeline.gamma: must lie in (0, 1)");
        if (!(pc.t > 0.0 && pc.t <= 1.0)) throw ValidationError("pipeline.t: must lie in (0, 1]");
        if (pc.delta && !(*pc.delta > 0.0)) throw ValidationError("pipeline.delta: must be positive");
        for (std::size_t n : pc.n)
            if (n == 0) throw ValidationError("pipeline.n: lengths must be positive");
    }

    if (j.contains("lemma2")) {
        const json& l = j.at("lemma2");
        allow_only(l, {"pairs", "n", "deltas", "dim"}, "lemma2");
        read(l, "pairs", c.lemma2.pairs, "lemma2");
        read(l, "n", c.lemma2.n, "lemma2");
        read(l, "deltas", c.lemma2.deltas, "lemma2");
        read(l, "dim", c.lemma2.dim, "lemma2");
        if (c.lemma2.n.empty() || c.lemma2.deltas.empty())
            throw ValidationError("lemma2: 'n' and 'deltas' must be nonempty");
        if (c.lemma2.dim < 2) throw ValidationError("lemma2.dim: must be at least 2");
    }

    if (j.contains("verify")) {
        const json& v = j.at("verify");
        allow_only(v, {"code", "oracle"}, "verify");
        std::string code;
        read(v, "code", code, "verify");
        if (!code.empty()) {
            c.verify.code = code;
            if (c.verify.code.is_relative()) c.verify.code = base_dir / c.verify.code;
        }
        read(v, "oracle", c.verify.oracle, "verify");
    }

    if (j.contains("sim_compare")) {
        const json& s = j.at("sim_compare");
        allow_only(s, {"povms", "bins"}, "sim_compare");
        read(s, "povms", c.sim.povms, "sim_compare");
        read(s, "bins", c.sim.bins, "sim_compare");
    }

    if (overrides.seed) c.seed = *overrides.seed;
    if (overrides.output) c.output = *overrides.output;
    if (overrides.cap) c.cap = *overrides.cap;

    // the output location does not change results, so it stays out of the hash
    json canonical = j;
    canonical.erase("output");
    canonical["seed"] = c.seed;
    canonical["cap"] = c.cap;
    c.hash = fnv1a_hex(canonical.dump());
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, const Overrides& overrides)
{
    return parse_config(read_file(path), path.parent_path(), overrides);
}

} // namespace didq::cli
