#include "rptf/io.hpp"

#include "rptf/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace rptf::io {

double round_sig(double v, int digits) {
    if (!std::isfinite(v) || v == 0.0) return v;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, v);
    return std::strtod(buf, nullptr);
}

json rounded(const json& j, int digits) {
    if (j.is_number_float()) return round_sig(j.get<double>(), digits);
    if (j.is_array()) {
        json out = json::array();
        for (const auto& e : j) out.push_back(rounded(e, digits));
        return out;
    }
    if (j.is_object()) {
        json out = json::object();
        for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = rounded(it.value(), digits);
        return out;
    }
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError("cannot write " + path.string());
        out << text;
        if (!out) throw ParseError("write failed for " + path.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw ParseError("cannot write " + path.string());
    }
}

json vector_json(const Vector& v) {
    json a = json::array();
    for (auto x : v) a.push_back(x);
    return a;
}

json matrix_json(const Matrix& M) {
    json a = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) a.push_back(vector_json(M.row(i).transpose()));
    return a;
}

Vector vector_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ParseError(std::string(what) + ": expected an array of numbers");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
        if (!std::isfinite(v[static_cast<Eigen::Index>(i)]))
            throw ParseError(std::string(what) + ": non-finite value");
    }
    return v;
}

Matrix matrix_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array of rows");
    if (j.empty()) return Matrix(0, 0);
    std::size_t cols = 0;
    std::vector<Vector> rows;
    for (const auto& r : j) {
        rows.push_back(vector_from_json(r, what));
        if (rows.size() == 1) cols = static_cast<std::size_t>(rows.back().size());
        if (static_cast<std::size_t>(rows.back().size()) != cols)
            throw ParseError(std::string(what) + ": ragged rows");
    }
    Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    return M;
}

json poly_to_json(const QuadPoly& g) {
    json j;
    j["schema"] = "ptf-model/1";
    j["n"] = g.n();
    j["A"] = matrix_json(g.A());
    j["b"] = vector_json(g.b());
    j["c"] = g.c();
    return j;
}

QuadPoly poly_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("model: expected an object");
    if (!j.contains("b")) throw ParseError("model: missing \"b\"");
    Vector b = vector_from_json(j["b"], "model.b");
    const auto n = b.size();
    if (j.contains("n")) {
        if (!j["n"].is_number_integer() || j["n"].get<long>() != static_cast<long>(n))
            throw ParseError("model: \"n\" does not match the length of \"b\"");
    }
    double c = 0.0;
    if (j.contains("c")) {
        if (!j["c"].is_number()) throw ParseError("model.c: expected a number");
        c = j["c"].get<double>();
    }
    Matrix A = Matrix::Zero(n, n);
    if (j.contains("A")) {
        A = matrix_from_json(j["A"], "model.A");
        if (A.rows() != n || A.cols() != n) throw ParseError("model.A: expected an n x n matrix");
    }
    return QuadPoly(A, b, c);
}

json net_to_json(const TwoLayerNet& net) {
    json j;
    j["schema"] = "net-model/1";
    j["W"] = matrix_json(net.W);
    j["V"] = matrix_json(net.V);
    j["v_prime"] = vector_json(net.v_prime);
    return j;
}

TwoLayerNet net_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("net: expected an object");
    if (!j.contains("W") || !j.contains("V")) throw ParseError("net: \"W\" and \"V\" are required");
    TwoLayerNet net;
    net.W = matrix_from_json(j["W"], "net.W");
    const json& V = j["V"];
    if (V.is_array() && !V.empty() && V[0].is_number())
        net.V = vector_from_json(V, "net.V").transpose();
    else
        net.V = matrix_from_json(V, "net.V");
    net.v_prime = j.contains("v_prime") ? vector_from_json(j["v_prime"], "net.v_prime")
                                        : Vector::Zero(net.W.cols());
    try {
        net.validate();
    } catch (const DimensionError& e) {
        throw ParseError(std::string("net: ") + e.what());
    }
    return net;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t p = line.find(',', start);
        out.push_back(trim(line.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return out;
}

bool parse_double(std::string_view s, double& v) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && p == s.data() + s.size() && std::isfinite(v);
}

}  // namespace

LabeledSet read_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::size_t cols = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) throw ParseError("csv: empty input");
    {
        const auto header = split(line);
        double probe = 0.0;
        if (parse_double(header.front(), probe)) throw ParseError("csv: header line required");
        cols = header.size();
        if (cols < 2) throw ParseError("csv: need at least one feature column and a label column");
    }
    LabeledSet S(cols - 1);
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split(line);
        const std::string where = "csv line " + std::to_string(lineno);
        if (fields.size() != cols)
            throw ParseError(where + ": expected " + std::to_string(cols) + " fields, got " +
                             std::to_string(fields.size()));
        Vector x(static_cast<Eigen::Index>(cols - 1));
        for (std::size_t i = 0; i + 1 < cols; ++i)
            if (!parse_double(fields[i], x[static_cast<Eigen::Index>(i)]))
                throw ParseError(where + ": bad number '" + std::string(fields[i]) + "'");
        double y = 0.0;
        if (!parse_double(fields.back(), y) || (y != 1.0 && y != -1.0))
            throw ParseError(where + ": label must be -1 or 1");
        S.add(std::move(x), static_cast<int>(y));
    }
    if (S.empty()) throw ParseError("csv: no data rows");
    return S;
}

LabeledSet read_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    try {
        return read_csv(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_csv(std::ostream& out, const LabeledSet& S) {
    for (std::size_t i = 0; i < S.dim(); ++i) out << 'x' << (i + 1) << ',';
    out << "y\n";
    char buf[40];
    for (const auto& p : S) {
        for (auto v : p.x) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << buf << ',';
        }
        out << p.y << '\n';
    }
}

std::string csv_string(const LabeledSet& S) {
    std::ostringstream os;
    write_csv(os, S);
    return os.str();
}

json outcome_json(const AttackOutcome& o) {
    json j;
    j["verdict"] = std::string(verdict_name(o.verdict));
    j["linf"] = o.linf;
    j["margin"] = o.margin;
    j["flip_value"] = o.flip_value;
    j["gamma"] = o.gamma_used;
    j["certificate_value"] = o.certificate_value ? json(*o.certificate_value) : json(nullptr);
    j["sdp_value"] = o.sdp_value ? json(*o.sdp_value) : json(nullptr);
    j["z"] = o.z ? vector_json(*o.z) : json(nullptr);
    if (!o.error.empty()) j["error"] = o.error;
    return j;
}

json summary_json(const BatchSummary& s) {
    json j;
    j["total"] = s.total;
    j["found"] = s.found;
    j["certified"] = s.certified;
    j["unknown"] = s.unknown;
    j["errors"] = s.errors;
    j["robust_accuracy_lower"] = s.robust_accuracy_lower;
    j["robust_accuracy_upper"] = s.robust_accuracy_upper;
    j["robust_error_lower_at_gamma"] = s.robust_error_lower_at_gamma;
    j["gamma"] = s.gamma;
    return j;
}

json attack_report(const BatchResult& r, const json& config) {
    json j;
    j["schema"] = "attack-report/1";
    j["config"] = config;
    j["summary"] = summary_json(r.summary);
    json ex = json::array();
    for (std::size_t i = 0; i < r.outcomes.size(); ++i) {
        json o = outcome_json(r.outcomes[i]);
        json e;
        e["index"] = i;
        for (auto it = o.begin(); it != o.end(); ++it) e[it.key()] = it.value();
        ex.push_back(std::move(e));
    }
    j["examples"] = std::move(ex);
    return rounded(j);
}

json learn_report(const LearnResult& r, const json& config) {
    json j;
    j["schema"] = "learn-report/1";
    j["config"] = config;
    j["status"] = std::string(learn_status_name(r.status));
    j["model"] = poly_to_json(r.f.poly());
    j["achieved_gamma"] = r.achieved_gamma;
    j["train_robust_error"] = r.train_robust_error;
    j["oracle_calls"] = r.oracle_calls;
    j["iterations"] = r.iterations;
    j["kappa"] = r.kappa;
    j["log_volume"] = r.log_volume;
    j["notes"] = r.notes;
    return rounded(j);
}

std::string transcript_jsonl(const LearnResult& r) {
    std::string out;
    for (const auto& t : r.transcript) {
        json j;
        j["iteration"] = t.iteration;
        j["cut"] = std::string(cut_kind_name(t.kind));
        j["index"] = t.index;
        j["depth"] = t.depth;
        j["log_volume"] = t.log_volume;
        out += rounded(j).dump() + "\n";
    }
    return out;
}

json gadget_to_json(const GadgetInstance& g) {
    json j;
    j["schema"] = "gadget/1";
    j["kind"] = std::string(gadget_kind_name(g.kind));
    j["n"] = g.n();
    j["points"] = g.S.size();
    json p;
    p["A"] = matrix_json(g.A);
    p["scale_factor"] = g.scale_factor;
    p["s"] = g.s;
    p["delta"] = g.delta;
    p["epsilon"] = g.epsilon;
    p["tau"] = g.tau;
    p["tau_prime"] = g.tau_prime;
    p["gamma_gadget"] = g.gamma_gadget;
    p["beta"] = g.beta;
    p["alpha"] = g.alpha;
    p["rho"] = g.rho;
    p["m"] = g.m;
    p["seed"] = g.seed;
    j["params"] = std::move(p);
    j["base_x"] = matrix_json(g.base_x);
    j["base_z"] = vector_json(g.base_z);
    json pairs = json::array();
    for (const auto& [a, b] : g.pairs) pairs.push_back(json::array({a, b}));
    j["pairs"] = std::move(pairs);
    j["type_a"] = g.type_a;
    j["warnings"] = g.warnings;
    j["intended"] = poly_to_json(g.intended().poly());
    j["data_csv"] = csv_string(g.S);
    return j;
}

GadgetInstance gadget_from_json(const json& j) {
    if (!j.is_object() || j.value("schema", "") != "gadget/1") throw ParseError("gadget: expected schema gadget/1");
    try {
        GadgetInstance g;
        g.kind = parse_gadget_kind(j.at("kind").get<std::string>());
        const json& p = j.at("params");
        g.A = matrix_from_json(p.at("A"), "gadget.A");
        g.scale_factor = p.at("scale_factor").get<double>();
        g.s = p.at("s").get<double>();
        g.delta = p.at("delta").get<double>();
        g.epsilon = p.at("epsilon").get<double>();
        g.tau = p.at("tau").get<double>();
        g.tau_prime = p.at("tau_prime").get<double>();
        g.gamma_gadget = p.at("gamma_gadget").get<double>();
        g.beta = p.at("beta").get<double>();
        g.alpha = p.at("alpha").get<double>();
        g.rho = p.at("rho").get<double>();
        g.m = p.at("m").get<std::size_t>();
        g.seed = p.at("seed").get<std::uint64_t>();
        g.base_x = matrix_from_json(j.at("base_x"), "gadget.base_x");
        if (g.base_x.rows() == 0) g.base_x.resize(0, g.A.rows());
        g.base_z = vector_from_json(j.at("base_z"), "gadget.base_z");
        for (const auto& pr : j.at("pairs")) g.pairs.emplace_back(pr.at(0).get<std::size_t>(), pr.at(1).get<std::size_t>());
        g.type_a = j.at("type_a").get<std::size_t>();
        g.warnings = j.at("warnings").get<std::vector<std::string>>();
        std::istringstream in(j.at("data_csv").get<std::string>());
        g.S = read_csv(in);
        if (g.S.dim() != g.n() + 1) throw ParseError("gadget: data dimension does not match A");
        for (const auto& [a, b] : g.pairs)
            if (a >= g.S.size() || b >= g.S.size()) throw ParseError("gadget: pair index out of range");
        g.S.set_delta(g.delta);
        return g;
    } catch (const json::exception& e) {
        throw ParseError(std::string("gadget: ") + e.what());
    }
}

json rank_json(const RankReport& r) {
    json j;
    j["r"] = r.r;
    j["rank"] = r.rank;
    j["expected_rank"] = r.r - 1;
    j["singular_values"] = vector_json(r.singular_values);
    j["null_vector"] = vector_json(r.null_vector);
    j["expected_null_vector"] = vector_json(r.expected);
    j["cosine"] = r.cosine;
    return j;
}

json robustness_json(const RobustnessVerdict& v) {
    json j;
    j["method"] = v.method;
    j["plain_error"] = v.plain_error;
    j["non_robust"] = v.non_robust;
    j["failing"] = v.failing;
    j["touching"] = v.touching;
    j["robust"] = v.robust;
    return j;
}

json pair_check_json(const PairCheck& p) {
    json j;
    j["pairs"] = p.pairs;
    j["exact"] = p.exact;
    j["ok"] = p.ok;
    return j;
}

}  // namespace rptf::io
