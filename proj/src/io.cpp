#include "edsfrey/io.hpp"

#include "edsfrey/error.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

namespace edsfrey {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io, "cannot write " + path.string());
    out << text;
    if (!out) fail(ErrorCode::io, "write failed for " + path.string());
}

namespace {

Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        fail(ErrorCode::invalid_input, what + ": " + e.what());
    }
}

const Json& field(const Json& obj, const char* key, const std::string& what) {
    if (!obj.is_object() || !obj.contains(key)) fail(ErrorCode::invalid_input, what + ": missing \"" + key + "\"");
    return obj.at(key);
}

// Exact: strings are parsed as integers or fractions, JSON integers are
// accepted, floating-point numbers are rejected.
Rational exact_number(const Json& v, const std::string& what) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(parse_integer(v.dump()));
    fail(ErrorCode::invalid_input, what + ": expected a decimal string or an integer");
}

Integer exact_integer(const Json& v, const std::string& what) {
    Rational r = exact_number(v, what);
    if (r.get_den() != 1) fail(ErrorCode::invalid_input, what + ": expected an integer");
    return r.get_num();
}

Integer norm_from_label(const std::string& label) {
    auto dot = label.find('.');
    try {
        return parse_integer(label.substr(0, dot));
    } catch (const Error&) {
        return 0;
    }
}

}  // namespace

CurveInput parse_curve(const std::string& text) {
    Json j = parse_json(text, "curve file");
    CurveInput c;
    const Json& a = field(j, "a", "curve file");
    if (!a.is_array() || a.size() != 5) fail(ErrorCode::invalid_input, "curve file: \"a\" must list a1, a2, a3, a4, a6");
    for (std::size_t i = 0; i < 5; ++i) c.a[i] = exact_integer(a[i], "curve coefficient");
    const Json& p = field(j, "point", "curve file");
    c.x = exact_number(field(p, "x", "point"), "point x");
    c.y = exact_number(field(p, "y", "point"), "point y");
    if (j.contains("name") && j["name"].is_string()) c.name = j["name"].get<std::string>();
    WeierstrassModel m = c.model();
    if (!m.contains(c.point())) fail(ErrorCode::not_on_curve, "the point does not lie on the curve");
    return c;
}

CurveInput load_curve(const fs::path& path) {
    CurveInput c = parse_curve(read_text_file(path));
    if (c.name.empty()) c.name = path.stem().string();
    return c;
}

EigenformData parse_eigenform(const std::string& text) {
    Json j = parse_json(text, "eigenform file");
    EigenformData f;
    const Json& label = field(j, "label", "eigenform");
    f.label = label.is_string() ? label.get<std::string>() : label.dump();
    for (const auto& c : field(j, "hecke_poly", "eigenform")) f.hecke_poly.push_back(exact_integer(c, "hecke_poly"));
    if (j.contains("level")) {
        for (const auto& q : j["level"]) {
            IdealPower ip;
            ip.label = field(q, "prime", "level").get<std::string>();
            ip.norm = norm_from_label(ip.label);
            long e = exact_integer(field(q, "exp", "level"), "level exponent").get_si();
            if (e < 0) fail(ErrorCode::invalid_input, "negative level exponent");
            ip.exp = static_cast<unsigned>(e);
            f.level.push_back(ip);
        }
    }
    f.level = normalized(f.level);
    for (const auto& a : field(j, "ap", "eigenform")) {
        HeckeEigenvalue h;
        h.label = field(a, "prime", "ap").get<std::string>();
        h.norm = a.contains("norm") ? exact_integer(a["norm"], "ap norm") : norm_from_label(h.label);
        for (const auto& c : field(a, "coords", "ap")) h.coords.push_back(exact_number(c, "ap coordinate"));
        if (h.coords.size() + 1 > f.hecke_poly.size())
            fail(ErrorCode::invalid_input, "eigenvalue at " + h.label + " has too many coordinates");
        f.ap.push_back(std::move(h));
    }
    return f;
}

std::vector<EigenformData> load_forms(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) fail(ErrorCode::io, "forms directory " + dir.string() + " is not readable");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    if (ec) fail(ErrorCode::io, "cannot list " + dir.string());
    std::sort(files.begin(), files.end());
    std::vector<EigenformData> forms;
    for (const auto& f : files) forms.push_back(parse_eigenform(read_text_file(f)));
    return forms;
}

// ---------------------------------------------------------------------------
// Term cache

TermCache::TermCache(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) fail(ErrorCode::io, "cannot create cache directory " + dir_.string());
    fs::path lock = dir_ / ".lock";
    lock_fd_ = ::open(lock.c_str(), O_RDWR | O_CREAT, 0644);
    if (lock_fd_ < 0) fail(ErrorCode::io, "cannot open " + lock.string());
    if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
        ::close(lock_fd_);
        lock_fd_ = -1;
        fail(ErrorCode::io, "cache directory " + dir_.string() + " is locked by another process");
    }
}

TermCache::~TermCache() {
    if (lock_fd_ >= 0) {
        ::flock(lock_fd_, LOCK_UN);
        ::close(lock_fd_);
    }
}

std::optional<fs::path> TermCache::from_environment() {
    const char* v = std::getenv("EDSFREY_CACHE_DIR");
    if (!v || !*v) return std::nullopt;
    return fs::path(v);
}

fs::path TermCache::file_for(const EDSequence& seq) const { return dir_ / (seq.hash() + ".terms"); }

std::size_t TermCache::load(EDSequence& seq) const {
    fs::path file = file_for(seq);
    if (!fs::exists(file)) return 0;
    std::istringstream in(read_text_file(file));
    auto corrupt = [&](const std::string& why) -> void {
        fail(ErrorCode::cache_corrupt, file.string() + ": " + why);
    };
    std::string line;
    if (!std::getline(in, line) || line != "# edsfrey-cache v1 " + seq.hash()) corrupt("header hash mismatch");
    std::vector<PointDecomposition> terms;
    std::string body;
    bool ended = false;
    while (std::getline(in, line)) {
        if (line.rfind("# end ", 0) == 0) {
            std::istringstream ls(line.substr(6));
            std::size_t count = 0;
            std::string digest;
            if (!(ls >> count >> digest) || count != terms.size() || digest != fnv1a_hex(body))
                corrupt("body digest mismatch");
            ended = true;
            break;
        }
        std::istringstream ls(line);
        std::string n, A, B, C;
        if (!(ls >> n >> A >> B >> C)) corrupt("malformed record");
        PointDecomposition d;
        try {
            d.n = std::stoul(n);
            d.A = parse_integer(A);
            d.B = parse_integer(B);
            d.C = parse_integer(C);
        } catch (const std::exception&) {
            corrupt("malformed record");
        }
        terms.push_back(std::move(d));
        body += line + "\n";
    }
    if (!ended) corrupt("truncated file");
    try {
        seq.preload(terms);
    } catch (const Error& e) {
        corrupt(e.what());
    }
    return terms.size();
}

void TermCache::store(const EDSequence& seq) const {
    std::string body;
    auto terms = seq.dense_terms();
    for (const auto& d : terms)
        body += std::to_string(d.n) + " " + to_string(d.A) + " " + to_string(d.B) + " " + to_string(d.C) + "\n";
    std::string text = "# edsfrey-cache v1 " + seq.hash() + "\n" + body + "# end " + std::to_string(terms.size()) +
                       " " + fnv1a_hex(body) + "\n";
    fs::path file = file_for(seq);
    fs::path tmp = file;
    tmp += ".tmp";
    write_text_file(tmp, text);
    std::error_code ec;
    fs::rename(tmp, file, ec);
    if (ec) fail(ErrorCode::io, "cannot replace " + file.string());
}

// ---------------------------------------------------------------------------
// JSON

Json to_json(const Integer& x) { return to_string(x); }
Json to_json(const Rational& x) { return to_string(x); }

Json to_json(const AlgebraicNumber& a) {
    if (!a.valid()) return nullptr;
    return a.coord_strings();
}

Json to_json(const PrimeIdealData& q) {
    Json j;
    j["label"] = q.label;
    j["p"] = to_json(q.p);
    j["norm"] = to_json(q.norm);
    j["e"] = q.e;
    j["f"] = q.f;
    j["safe"] = q.safe;
    return j;
}

namespace {

template <class T>
Json array_of(const T& items) {
    Json a = Json::array();
    for (const auto& x : items) a.push_back(to_json(x));
    return a;
}

Json labels_of(const std::vector<PrimeIdealData>& v) {
    Json a = Json::array();
    for (const auto& q : v) a.push_back(q.label);
    return a;
}

}  // namespace

Json to_json(const KappaCertificate& c) {
    Json j;
    j["q"] = to_json(c.q);
    j["r"] = c.r;
    j["kappa"] = c.kappa;
    j["p"] = to_json(c.p);
    j["witness_index"] = c.witness_index;
    j["v_q_B1"] = c.v_q_B1;
    j["empirical"] = c.empirical;
    j["silverman_start"] = c.silverman_start;
    return j;
}

Json to_json(const StrongDivisibilityReport& r) {
    Json j;
    j["max_index"] = r.max_index;
    j["pairs_checked"] = r.pairs_checked;
    j["passed"] = r.passed;
    j["first_violation"] = r.first_violation ? Json::array({r.first_violation->first, r.first_violation->second}) : Json();
    return j;
}

Json to_json(const ValuationGridReport& r) {
    Json j;
    j["max_product"] = r.max_product;
    j["a1_even"] = r.a1_even;
    j["cells"] = r.entries.size();
    j["passed"] = r.passed;
    j["first_violation"] = r.first_violation ? Json::array({r.first_violation->first, r.first_violation->second}) : Json();
    j["empirical_r"] = r.empirical_r ? Json(*r.empirical_r) : Json();
    return j;
}

Json to_json(const PrimitiveDivisorReport& r) {
    Json j;
    j["from"] = r.from;
    j["to"] = r.to;
    j["without_primitive_divisor"] = r.without_primitive;
    j["passed"] = r.passed();
    return j;
}

Json to_json(const PowerInstance& p) {
    Json j;
    j["n"] = p.n;
    j["u"] = to_json(p.u);
    j["ell"] = p.ell;
    return j;
}

Json to_json(const FieldTower& t) {
    Json j;
    Json sm;
    sm["a"] = to_json(t.short_model.a);
    sm["b"] = to_json(t.short_model.b);
    sm["c"] = to_json(t.short_model.c);
    j["short_model"] = sm;
    j["point"] = {{"x", to_json(t.xP)}, {"y", to_json(t.yP)}};
    j["degree_K"] = t.K.degree();
    j["degree_L"] = t.L.degree();
    j["steps"] = t.L.step_names();
    j["step_degrees"] = t.L.step_degrees();
    j["adjoined"] = {t.adjoined[0], t.adjoined[1]};
    j["primitive_combination"] = array_of(t.L.primitive_combination());
    j["primitive_poly"] = array_of(t.L.primitive_poly());
    j["disc_multiple"] = to_json(t.L.disc_multiple());
    j["real_embeddings"] = t.L.real_embeddings();
    j["complex_pairs"] = t.L.complex_pairs();
    j["totally_real"] = t.totally_real;
    j["theta"] = array_of(t.theta);
    return j;
}

Json to_json(const SupportSets& s) {
    Json j;
    j["S"] = array_of(s.S);
    j["T"] = labels_of(s.T);
    j["T_rational"] = array_of(s.T_rational);
    Json mk;
    mk["disc_abs"] = to_json(s.minkowski.disc_abs);
    mk["d"] = s.minkowski.d;
    mk["s"] = s.minkowski.s;
    mk["floor_upper"] = to_json(s.minkowski.floor_upper);
    j["minkowski"] = mk;
    j["kappa_certificate"] = to_json(s.certificate);
    j["frak_p"] = to_json(s.frak_p);
    return j;
}

Json to_json(const DescentTriple& t) {
    Json j;
    j["n"] = t.n;
    j["A"] = to_json(t.A);
    j["B"] = to_json(t.B);
    j["eps"] = array_of(t.eps);
    j["signs"] = t.signs;
    j["sign_normalized"] = t.sign_normalized;
    return j;
}

Json to_json(const GcdSupportReport& r) {
    Json j;
    j["passed"] = r.passed;
    Json pairs = Json::array();
    for (const auto& p : r.pairs) {
        Json q;
        q["i"] = p.i + 1;
        q["j"] = p.j + 1;
        q["norm_minus"] = to_json(p.norm_minus);
        q["norm_plus"] = to_json(p.norm_plus);
        q["gcd"] = to_json(p.gcd);
        q["residual"] = to_json(p.residual);
        q["passed"] = p.passed;
        if (!p.note.empty()) q["note"] = p.note;
        pairs.push_back(q);
    }
    j["pairs"] = pairs;
    return j;
}

Json to_json(const ScaledTriple& s) {
    Json j;
    j["alpha"] = to_json(s.alpha);
    j["method"] = s.method;
    j["w"] = array_of(s.w);
    j["z"] = array_of(s.z);
    return j;
}

Json to_json(const FreyCurve& f) {
    Json j;
    j["z"] = array_of(f.z);
    j["a"] = array_of(f.a);
    j["delta_F"] = to_json(f.delta_F);
    j["c4_F"] = to_json(f.c4_F);
    Json red = Json::object();
    for (const auto& [label, r] : f.reduction) red[label] = to_string(r);
    j["reduction"] = red;
    return j;
}

Json to_json(const PropReport& r) {
    Json j;
    j["ell"] = r.ell;
    j["norm_bound"] = to_json(r.norm_bound);
    j["primes_checked"] = r.primes.size();
    j["frak_p_multiplicative"] = r.frak_p_multiplicative;
    j["frak_p_pattern"] = r.frak_p_pattern;
    j["norm_certificate"] = r.norm_certificate;
    j["violations"] = r.violations;
    j["passed"] = r.passed();
    return j;
}

Json to_json(const PipelineResult& r) {
    Json j;
    j["n"] = r.n;
    j["tower"] = to_json(r.tower);
    j["support"] = to_json(r.support);
    j["descent"] = to_json(r.triple);
    j["gcd_support"] = to_json(r.gcd);
    j["B_power"] = {{"u", to_json(r.power.first)}, {"k", r.power.second}};
    j["pattern_prime"] = r.pattern_prime ? to_json(*r.pattern_prime) : Json();
    j["pattern_source"] = r.pattern_source;
    j["scaling"] = r.scaled ? to_json(*r.scaled) : Json();
    j["frey"] = r.frey ? to_json(*r.frey) : Json();
    j["prop"] = r.prop ? to_json(*r.prop) : Json();
    j["notes"] = r.notes;
    return j;
}

Json to_json(const BoundReport& r) {
    Json j;
    j["disc_multiple"] = to_json(r.disc_multiple);
    j["C_L"] = to_json(r.C_L);
    j["norm_p"] = to_json(r.norm_p);
    j["kappa"] = to_json(r.kappa);
    j["kappa1"] = to_json(r.kappa1);
    j["kappa2"] = to_json(r.kappa2);
    j["kappa_prime"] = to_json(r.kappa_prime);
    Json forms = Json::array();
    for (const auto& f : r.forms) {
        Json fj;
        fj["label"] = f.label;
        fj["level"] = f.level;
        fj["norm_minus"] = to_json(f.result.norm_minus);
        fj["norm_plus"] = to_json(f.result.norm_plus);
        fj["primes"] = array_of(f.result.primes);
        fj["residual"] = to_json(f.result.residual);
        fj["ramanujan"] = f.result.ramanujan;
        if (!f.note.empty()) fj["note"] = f.note;
        forms.push_back(fj);
    }
    j["forms"] = forms;
    j["level_count"] = to_json(r.level_count);
    j["gaps"] = r.gaps;
    j["final_bound"] = to_json(r.final_bound);
    return j;
}

Json to_json(const CurveInput& c) {
    Json j;
    j["name"] = c.name;
    j["a"] = array_of(c.a);
    j["point"] = {{"x", to_json(c.x)}, {"y", to_json(c.y)}};
    return j;
}

Json environment_fingerprint() {
    Json j;
    j["program"] = "edsfrey";
    j["version"] = "1.0.0";
    j["compiler"] = __VERSION__;
    j["cxx"] = static_cast<long>(__cplusplus);
    j["gmp"] = gmp_version;
#ifdef _OPENMP
    j["openmp"] = _OPENMP;
#else
    j["openmp"] = nullptr;
#endif
    return j;
}

Json make_certificate(const std::string& kind, Json inputs, Json outcome, bool passed) {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) now = std::strtoll(epoch, nullptr, 10);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
    Json j;
    j["certificate"] = kind;
    j["passed"] = passed;
    j["inputs"] = std::move(inputs);
    j["outcome"] = std::move(outcome);
    j["environment"] = environment_fingerprint();
    j["timestamp"] = stamp;
    return j;
}

Json without_timestamp(Json cert) {
    if (cert.is_object()) cert.erase("timestamp");
    return cert;
}

}  // namespace edsfrey
