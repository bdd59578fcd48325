#include "didq/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "didq/error.hpp"

namespace didq {

using json = nlohmann::ordered_json;

namespace {

json interval_json(const Interval& iv)
{
    return json{{"lo", iv.lo}, {"hi", iv.hi}, {"closed_hi", iv.closed_hi}};
}

template <class T>
T get_field(const json& j, const char* key, const std::string& where)
{
    if (!j.contains(key)) throw ValidationError(where + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(where + ": field '" + key + "' has the wrong type");
    }
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ValidationError(where + ": unknown field '" + key + "'");
    }
}

Interval interval_from(const json& j, const std::string& where)
{
    if (!j.is_object()) throw ValidationError(where + ": expected an object {lo, hi, closed_hi}");
    reject_unknown(j, {"lo", "hi", "closed_hi"}, where);
    Interval iv;
    iv.lo = get_field<double>(j, "lo", where);
    iv.hi = get_field<double>(j, "hi", where);
    iv.closed_hi = j.contains("closed_hi") ? get_field<bool>(j, "closed_hi", where) : true;
    return iv;
}

json channel_json(const CqChannel& ch)
{
    switch (ch.family()) {
    case FamilyId::FiniteTable: {
        json states = json::array();
        for (const ComplexMatrix& s : ch.table_states()) {
            json rows = json::array();
            for (std::size_t r = 0; r < s.dim(); ++r) {
                json row = json::array();
                for (std::size_t c = 0; c < s.dim(); ++c) row.push_back(json::array({s(r, c).real(), s(r, c).imag()}));
                rows.push_back(row);
            }
            states.push_back(rows);
        }
        return json{{"dim", ch.output_dim()}, {"states", states}};
    }
    case FamilyId::BlochCircle:
        return json{{"family", "bloch_circle"}, {"theta", interval_json(ch.domain()[0])}};
    case FamilyId::BlochCap:
        return json{{"family", "bloch_cap"}, {"cap_angle", ch.domain()[0].hi}};
    case FamilyId::CantorCircle:
        return json{{"family", "cantor_circle"}, {"depth", ch.cantor_depth()}};
    case FamilyId::MixedSegment:
        return json{{"family", "mixed_segment"}, {"p", interval_json(ch.domain()[0])}};
    case FamilyId::Measured:
        break;
    }
    throw ValidationError("channel_to_json: measured channels cannot be serialized");
}

CqChannel channel_from(const json& j)
{
    const std::string where = "channel";
    if (!j.is_object()) throw ValidationError("channel: expected a JSON object");
    if (!j.contains("family")) {
        reject_unknown(j, {"dim", "states"}, where);
        const auto d = get_field<std::size_t>(j, "dim", where);
        if (d == 0) throw ValidationError("channel: dim must be positive");
        const json& states = j.contains("states") ? j.at("states") : json();
        if (!states.is_array() || states.empty()) throw ValidationError("channel: 'states' must be a nonempty array");
        std::vector<ComplexMatrix> out;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const std::string si = "states[" + std::to_string(i) + "]";
            const json& rows = states[i];
            if (!rows.is_array() || rows.size() != d)
                throw ValidationError(si + ": expected " + std::to_string(d) + " rows");
            ComplexMatrix m(d);
            for (std::size_t r = 0; r < d; ++r) {
                const json& row = rows[r];
                const std::string sr = si + "[" + std::to_string(r) + "]";
                if (!row.is_array() || row.size() != d)
                    throw ValidationError(sr + ": expected " + std::to_string(d) + " entries");
                for (std::size_t c = 0; c < d; ++c) {
                    const json& e = row[c];
                    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                        throw ValidationError(sr + "[" + std::to_string(c) + "]: expected [re, im]");
                    m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
                }
            }
            out.push_back(std::move(m));
        }
        return CqChannel::finite_table(std::move(out));
    }

    const auto family = get_field<std::string>(j, "family", where);
    if (family == "bloch_circle") {
        reject_unknown(j, {"family", "theta"}, where);
        return j.contains("theta") ? CqChannel::bloch_circle(interval_from(j.at("theta"), "channel.theta"))
                                   : CqChannel::bloch_circle();
    }
    if (family == "bloch_cap") {
        reject_unknown(j, {"family", "cap_angle"}, where);
        return CqChannel::bloch_cap(get_field<double>(j, "cap_angle", where));
    }
    if (family == "cantor_circle") {
        reject_unknown(j, {"family", "depth"}, where);
        return CqChannel::cantor_circle(j.contains("depth") ? get_field<int>(j, "depth", where) : 7);
    }
    if (family == "mixed_segment") {
        reject_unknown(j, {"family", "p"}, where);
        return j.contains("p") ? CqChannel::mixed_segment(interval_from(j.at("p"), "channel.p"))
                               : CqChannel::mixed_segment();
    }
    throw ValidationError("channel: unknown family '" + family + "'");
}

json letter_json(const Letter& x)
{
    if (const auto* i = std::get_if<std::size_t>(&x)) return *i;
    return std::get<std::vector<double>>(x);
}

Letter letter_from(const json& j, const std::string& where)
{
    if (j.is_number_unsigned()) return j.get<std::size_t>();
    if (j.is_array()) {
        std::vector<double> p;
        for (const json& v : j) {
            if (!v.is_number()) throw ValidationError(where + ": letter parameters must be numbers");
            p.push_back(v.get<double>());
        }
        return p;
    }
    throw ValidationError(where + ": expected a table index or a parameter list");
}

json provenance_json(const Provenance& p)
{
    return json{{"config_hash", p.config_hash}, {"seed", p.seed}, {"version", p.version}};
}

json real_json(double x)
{
    if (std::isfinite(x)) return x;
    return format_real(x);
}

json parse(std::string_view text, const char* what)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string(what) + ": invalid JSON: " + e.what());
    }
}

} // namespace

std::string channel_to_json(const CqChannel& channel)
{
    return channel_json(channel).dump(2) + "\n";
}

CqChannel channel_from_json(std::string_view text)
{
    return channel_from(parse(text, "channel"));
}

std::string letter_to_json(const Letter& letter)
{
    return letter_json(letter).dump();
}

std::string packing_to_json(const Packing& packing, const Provenance& provenance)
{
    json letters = json::array();
    for (const Letter& x : packing.points) letters.push_back(letter_json(x));
    json j{{"metric", to_string(packing.metric)},
           {"delta", packing.delta},
           {"scale", packing.scale},
           {"grid", packing.grid.resolution},
           {"candidates", packing.candidate_count},
           {"letters", letters},
           {"provenance", provenance_json(provenance)}};
    return j.dump(2) + "\n";
}

std::string code_to_json(const DICode& code, const std::optional<ErrorReport>& measured,
                         const Provenance& provenance)
{
    json alphabet = json::array();
    for (const Letter& x : code.alphabet) alphabet.push_back(letter_json(x));
    json words = json::array();
    for (std::size_t i = 0; i < code.size(); ++i) {
        const auto w = code.codewords[i];
        words.push_back(std::vector<std::uint32_t>(w.begin(), w.end()));
    }
    json j{{"artifact", "didq-code"},
           {"provenance", provenance_json(provenance)},
           {"channel", channel_json(code.channel)},
           {"decoder", to_string(code.decoder)},
           {"params",
            {{"n", code.params.n},
             {"alpha", code.params.alpha},
             {"t", code.params.t},
             {"delta", code.params.delta},
             {"gamma", code.params.gamma}}},
           {"alphabet", alphabet},
           {"codewords", words}};
    if (measured) {
        json m{{"lambda1", real_json(measured->lambda1)},
               {"lambda2", real_json(measured->lambda2)},
               {"lambda1_argmax", measured->lambda1_argmax}};
        m["lambda2_argmax"] = measured->lambda2_argmax
                                  ? json::array({measured->lambda2_argmax->first, measured->lambda2_argmax->second})
                                  : json(nullptr);
        j["measured"] = m;
    } else {
        j["measured"] = nullptr;
    }
    return j.dump(2) + "\n";
}

StoredCode code_from_json(std::string_view text)
{
    const json j = parse(text, "code");
    const std::string where = "code";
    if (!j.is_object()) throw ValidationError("code: expected a JSON object");
    reject_unknown(j, {"artifact", "provenance", "channel", "decoder", "params", "alphabet", "codewords", "measured"},
                   where);
    if (get_field<std::string>(j, "artifact", where) != "didq-code")
        throw ValidationError("code: not a code artifact");

    StoredCode out;
    if (j.contains("provenance")) {
        const json& p = j.at("provenance");
        out.provenance.config_hash = get_field<std::string>(p, "config_hash", "code.provenance");
        out.provenance.seed = get_field<std::uint64_t>(p, "seed", "code.provenance");
        out.provenance.version = get_field<std::string>(p, "version", "code.provenance");
    }
    if (!j.contains("channel")) throw ValidationError("code: missing field 'channel'");
    out.code.channel = channel_from(j.at("channel"));
    out.code.decoder = decoder_from_string(get_field<std::string>(j, "decoder", where));

    const json& p = j.contains("params") ? j.at("params") : json::object();
    out.code.params.n = get_field<std::size_t>(p, "n", "code.params");
    out.code.params.alpha = get_field<double>(p, "alpha", "code.params");
    out.code.params.t = get_field<double>(p, "t", "code.params");
    out.code.params.delta = get_field<double>(p, "delta", "code.params");
    out.code.params.gamma = get_field<double>(p, "gamma", "code.params");

    const json& alphabet = j.contains("alphabet") ? j.at("alphabet") : json();
    if (!alphabet.is_array() || alphabet.empty()) throw ValidationError("code: 'alphabet' must be a nonempty array");
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
        Letter x = letter_from(alphabet[a], "code.alphabet[" + std::to_string(a) + "]");
        if (!out.code.channel.contains(x))
            throw ValidationError("code.alphabet[" + std::to_string(a) + "]: letter outside the channel domain");
        out.code.alphabet.push_back(std::move(x));
    }

    const json& words = j.contains("codewords") ? j.at("codewords") : json();
    if (!words.is_array()) throw ValidationError("code: 'codewords' must be an array");
    out.code.codewords = WordList(out.code.params.n, out.code.alphabet.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        const std::string wi = "code.codewords[" + std::to_string(i) + "]";
        std::vector<std::uint32_t> w;
        try {
            w = words[i].get<std::vector<std::uint32_t>>();
        } catch (const json::exception&) {
            throw ValidationError(wi + ": expected a list of alphabet indices");
        }
        try {
            out.code.codewords.push_back(w);
        } catch (const ValidationError& e) {
            throw ValidationError(wi + ": " + e.what());
        }
    }

    if (j.contains("measured") && !j.at("measured").is_null()) {
        const json& m = j.at("measured");
        ErrorReport r;
        r.codewords = out.code.size();
        auto real = [&](const char* key) {
            const json& v = m.at(key);
            if (v.is_string()) return std::stod(v.get<std::string>());
            return v.get<double>();
        };
        r.lambda1 = real("lambda1");
        r.lambda2 = real("lambda2");
        r.lambda1_argmax = get_field<std::size_t>(m, "lambda1_argmax", "code.measured");
        if (m.contains("lambda2_argmax") && !m.at("lambda2_argmax").is_null()) {
            const auto pair = m.at("lambda2_argmax").get<std::vector<std::size_t>>();
            if (pair.size() != 2) throw ValidationError("code.measured.lambda2_argmax: expected [j, k]");
            r.lambda2_argmax = std::make_pair(pair[0], pair[1]);
        }
        out.measured = r;
    }
    validate_code(out.code);
    return out;
}

std::string fnv1a_hex(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_real(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_row(const std::vector<std::string>& fields)
{
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out += ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n") == std::string::npos) {
            out += f;
            continue;
        }
        out += '"';
        for (char c : f) {
            if (c == '"') out += '"';
            out += c;
        }
        out += '"';
    }
    out += '\n';
    return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view contents)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw ValidationError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace didq
