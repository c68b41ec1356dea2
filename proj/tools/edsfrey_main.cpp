// edsfrey: command-line driver.
//
//   edsfrey eds gen|props|primdiv|powers|cert --curve FILE ...
//   edsfrey frey build --curve FILE --n N [--prime P] [--explain]
//   edsfrey bound exponent --curve FILE --forms DIR --C_L N [--no-assume-modularity --kappa1 K]
//
// Exit status: 0 success, 1 verification failure, 2 input error, 3 budget or undecided.

#include "edsfrey/error.hpp"
#include "edsfrey/io.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <memory>
#include <sstream>

using namespace edsfrey;

namespace {

struct RunConfig {
    std::string curve;
    std::string cache_dir;
    unsigned long max_index = 30;
    unsigned long max_product = 0;
    unsigned long from = 5;
    unsigned long min_exponent = 2;
    std::uint64_t trial_division_bound = 1000000;
    unsigned long silverman_start = 2;
    std::vector<std::string> T;
    unsigned long n = 1;
    std::string prime;
    unsigned long norm_bound = 1000;
    bool explain = false;
    std::string C_L = "1";
    bool assume_modularity = true;
    std::string kappa1;
    std::string forms;
    bool json = false;
    std::string output;
};

// Loaded curve plus the sequence, wired to the cache when one is configured.
struct Session {
    CurveInput input;
    WeierstrassModel model;
    std::unique_ptr<EDSequence> seq;
    std::unique_ptr<TermCache> cache;
    std::size_t cached_terms = 0;

    explicit Session(const RunConfig& cfg)
        : input(load_curve(cfg.curve)), model(input.model()) {
        seq = std::make_unique<EDSequence>(model, input.point());
        std::optional<std::filesystem::path> dir;
        if (!cfg.cache_dir.empty()) dir = cfg.cache_dir;
        else dir = TermCache::from_environment();
        if (dir) {
            cache = std::make_unique<TermCache>(*dir);
            cached_terms = cache->load(*seq);
        }
    }

    void flush() const {
        if (cache) cache->store(*seq);
    }
};

void require_positive(unsigned long v, const char* what) {
    if (v == 0) fail(ErrorCode::config, std::string(what) + " must be positive");
}

void emit(const RunConfig& cfg, const Json& cert, const std::string& human) {
    if (!cfg.output.empty()) write_text_file(cfg.output, cert.dump(2) + "\n");
    if (cfg.json) std::cout << cert.dump(2) << "\n";
    else std::cout << human;
}

Json base_inputs(const RunConfig& cfg, const Session& s) {
    Json in;
    in["curve"] = to_json(s.input);
    in["curve_hash"] = s.seq->hash();
    in["trial_division_bound"] = cfg.trial_division_bound;
    return in;
}

// ---------------------------------------------------------------------------
// eds

int eds_gen(const RunConfig& cfg) {
    require_positive(cfg.max_index, "--max-index");
    Session s(cfg);
    s.seq->ensure(cfg.max_index);
    Json terms = Json::array();
    std::ostringstream out;
    out << "curve " << s.model.to_string() << "  P = (" << to_string(s.input.x) << ", " << to_string(s.input.y) << ")\n";
    if (s.cache) out << "cache: " << s.cached_terms << " terms loaded from " << s.cache->dir().string() << "\n";
    for (unsigned long n = 1; n <= cfg.max_index; ++n) {
        const auto& d = s.seq->term(n);
        terms.push_back({{"n", n}, {"A", to_json(d.A)}, {"B", to_json(d.B)}, {"C", to_json(d.C)}});
        out << "B_" << n << " = " << to_string(d.B) << "\n";
    }
    s.flush();
    Json in = base_inputs(cfg, s);
    in["max_index"] = cfg.max_index;
    emit(cfg, make_certificate("eds.gen", in, {{"terms", terms}}, true), out.str());
    return 0;
}

int eds_props(const RunConfig& cfg) {
    require_positive(cfg.max_index, "--max-index");
    Session s(cfg);
    unsigned long product = cfg.max_product ? cfg.max_product : cfg.max_index;
    auto sd = check_strong_divisibility(*s.seq, cfg.max_index);
    auto grid = check_valuation_grid(*s.seq, product);
    s.flush();
    bool ok = sd.passed && grid.passed;
    std::ostringstream out;
    out << "strong divisibility, m, n <= " << cfg.max_index << ": " << (sd.passed ? "pass" : "FAIL") << " ("
        << sd.pairs_checked << " pairs)\n";
    out << "valuation law, nm <= " << product << ": " << (grid.passed ? "pass" : "FAIL") << " (" << grid.entries.size()
        << " cells)\n";
    if (grid.empirical_r) out << "empirical r at p = 2 (odd a1): " << *grid.empirical_r << "\n";
    Json in = base_inputs(cfg, s);
    in["max_index"] = cfg.max_index;
    in["max_product"] = product;
    emit(cfg, make_certificate("eds.props", in, {{"strong_divisibility", to_json(sd)}, {"valuation_law", to_json(grid)}}, ok),
         out.str());
    return ok ? 0 : 1;
}

int eds_primdiv(const RunConfig& cfg) {
    require_positive(cfg.max_index, "--max-index");
    require_positive(cfg.from, "--from");
    Session s(cfg);
    auto rep = check_primitive_divisors(*s.seq, cfg.from, cfg.max_index);
    Json cof = Json::array();
    std::ostringstream out;
    for (unsigned long n = cfg.from; n <= cfg.max_index; ++n) {
        Integer c = primitive_divisor_cofactor(*s.seq, n);
        cof.push_back({{"n", n}, {"cofactor", to_json(c)}});
        out << "n = " << n << "  primitive cofactor " << to_string(c) << (c == 1 ? "  (none)" : "") << "\n";
    }
    s.flush();
    Json in = base_inputs(cfg, s);
    in["from"] = cfg.from;
    in["max_index"] = cfg.max_index;
    Json outcome = to_json(rep);
    outcome["cofactors"] = cof;
    emit(cfg, make_certificate("eds.primdiv", in, outcome, rep.passed()), out.str());
    return rep.passed() ? 0 : 1;
}

int eds_powers(const RunConfig& cfg) {
    require_positive(cfg.max_index, "--max-index");
    if (cfg.min_exponent < 2) fail(ErrorCode::config, "--min-exponent must be at least 2");
    Session s(cfg);
    auto found = find_power_terms(*s.seq, cfg.max_index, cfg.min_exponent);
    s.flush();
    std::ostringstream out;
    for (const auto& p : found) out << "B_" << p.n << " = " << to_string(p.u) << "^" << p.ell << "\n";
    if (found.empty()) out << "no B_n with n <= " << cfg.max_index << " is a perfect power of exponent >= " << cfg.min_exponent << "\n";
    Json in = base_inputs(cfg, s);
    in["max_index"] = cfg.max_index;
    in["min_exponent"] = cfg.min_exponent;
    Json list = Json::array();
    for (const auto& p : found) list.push_back(to_json(p));
    emit(cfg, make_certificate("eds.powers", in, {{"powers", list}}, true), out.str());
    return 0;
}

std::set<Integer> parse_prime_set(const RunConfig& cfg, const WeierstrassModel& model) {
    std::set<Integer> T;
    if (cfg.T.empty()) {
        auto ps = prime_divisors(2 * model.delta(), cfg.trial_division_bound);
        if (!ps) fail(ErrorCode::budget_exceeded, "cannot factor 2 Delta_E within the trial-division bound");
        T.insert(ps->begin(), ps->end());
        return T;
    }
    for (const auto& t : cfg.T) {
        Integer q = parse_integer(t);
        if (q < 2 || !is_probable_prime(q)) fail(ErrorCode::invalid_input, "--T entries must be primes");
        T.insert(q);
    }
    return T;
}

int eds_cert(const RunConfig& cfg) {
    require_positive(cfg.silverman_start, "--start");
    Session s(cfg);
    auto T = parse_prime_set(cfg, s.model);
    KappaOptions opt;
    opt.trial_division_bound = cfg.trial_division_bound;
    auto cert = kappa_certificate(*s.seq, T, cfg.silverman_start, opt);
    bool ok = verify_certificate(*s.seq, cert, T);
    s.flush();
    std::ostringstream out;
    out << "q = " << to_string(cert.q) << "  r = " << cert.r << (cert.empirical ? " (empirical)" : "") << "  kappa = "
        << cert.kappa << "\np = " << to_string(cert.p) << " divides B_" << cert.witness_index << "\nre-verification: "
        << (ok ? "pass" : "FAIL") << "\n";
    Json in = base_inputs(cfg, s);
    Json tj = Json::array();
    for (const auto& q : T) tj.push_back(to_json(q));
    in["T"] = tj;
    in["silverman_start"] = cfg.silverman_start;
    Json outcome = to_json(cert);
    outcome["reverified"] = ok;
    emit(cfg, make_certificate("eds.kappa", in, outcome, ok), out.str());
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// frey

std::string explain(const PipelineResult& r) {
    std::ostringstream o;
    const auto& t = r.tower;
    o << "tower: [K:Q] = " << t.K.degree() << ", [L:Q] = " << t.L.degree() << (t.totally_real ? ", totally real" : "")
      << "\n";
    o << "S:";
    for (const auto& q : r.support.S) o << " " << q.label;
    o << "\nT (Minkowski):";
    for (const auto& q : r.support.T) o << " " << q.label;
    const auto& c = r.support.certificate;
    o << "\nkappa certificate: q = " << to_string(c.q) << ", kappa = " << c.kappa << ", p = " << to_string(c.p) << "\n";
    o << "n = " << r.n << ": A = " << to_string(r.triple.A) << ", B = " << to_string(r.triple.B) << "\n";
    for (int i = 0; i < 3; ++i) o << "eps_" << i + 1 << " = " << r.triple.eps[i].to_string() << "\n";
    o << "gcd support: " << (r.gcd.passed ? "pass" : "FAIL") << "\n";
    if (r.pattern_prime) o << "sign pattern at " << r.pattern_prime->label << " (" << r.pattern_source << ")\n";
    if (r.scaled) {
        o << "alpha = " << r.scaled->alpha.to_string() << " (" << r.scaled->method << ")\n";
        for (int i = 0; i < 3; ++i) o << "z_" << i + 1 << " = " << r.scaled->z[i].to_string() << "\n";
    }
    if (r.frey) o << "Delta_F = " << r.frey->delta_F.to_string() << "\nc4_F = " << r.frey->c4_F.to_string() << "\n";
    if (r.prop) {
        o << "reduction checks up to norm " << to_string(r.prop->norm_bound) << ": "
          << (r.prop->passed() ? "pass" : "FAIL") << "\n";
        for (const auto& v : r.prop->violations) o << "  " << v << "\n";
    }
    for (const auto& n : r.notes) o << "note: " << n << "\n";
    return o.str();
}

int frey_build(const RunConfig& cfg) {
    require_positive(cfg.n, "--n");
    require_positive(cfg.norm_bound, "--norm-bound");
    Session s(cfg);
    PipelineOptions opt;
    opt.silverman_start = cfg.silverman_start;
    opt.support.trial_division_bound = cfg.trial_division_bound;
    opt.support.kappa.trial_division_bound = cfg.trial_division_bound;
    opt.scale.trial_division_bound = cfg.trial_division_bound;
    opt.prop_norm_bound = cfg.norm_bound;
    if (!cfg.prime.empty()) opt.prime = parse_integer(cfg.prime);
    Json in = base_inputs(cfg, s);
    in["n"] = cfg.n;
    in["silverman_start"] = cfg.silverman_start;
    in["norm_bound"] = cfg.norm_bound;
    in["prime"] = cfg.prime.empty() ? Json() : Json(cfg.prime);
    try {
        PipelineResult r = run_frey_pipeline(s.model, *s.seq, cfg.n, opt);
        s.flush();
        bool ok = r.passed();
        std::string human = cfg.explain ? explain(r) : "";
        if (!cfg.explain) {
            std::ostringstream o;
            for (int i = 0; i < 3; ++i) o << "eps_" << i + 1 << " = " << r.triple.eps[i].to_string() << "\n";
            if (r.scaled)
                for (int i = 0; i < 3; ++i) o << "z_" << i + 1 << " = " << r.scaled->z[i].to_string() << "\n";
            o << (ok ? "pass" : "FAIL") << "\n";
            human = o.str();
        }
        emit(cfg, make_certificate("frey.build", in, to_json(r), ok), human);
        return ok ? 0 : 1;
    } catch (const Error& e) {
        s.flush();
        Json partial = {{"error", {{"code", to_string(e.code())}, {"message", e.what()}}}};
        if (!cfg.output.empty()) write_text_file(cfg.output, make_certificate("frey.build", in, partial, false).dump(2) + "\n");
        if (cfg.json) std::cout << make_certificate("frey.build", in, partial, false).dump(2) << "\n";
        throw;
    }
}

// ---------------------------------------------------------------------------
// bound

int bound_exponent(const RunConfig& cfg) {
    if (cfg.forms.empty()) fail(ErrorCode::config, "--forms is required");
    BoundConfig bc;
    bc.C_L = parse_integer(cfg.C_L);
    bc.assume_modularity = cfg.assume_modularity;
    if (!cfg.kappa1.empty()) bc.kappa1 = parse_integer(cfg.kappa1);
    if (!bc.assume_modularity && !bc.kappa1)
        fail(ErrorCode::config, "--kappa1 is required when modularity is not assumed");
    auto forms = load_forms(cfg.forms);
    Session s(cfg);
    auto [sm, P] = to_short_model(s.model, s.seq->generator());
    FieldTower tower = build_tower(sm, P.x(), P.y());
    SupportOptions so;
    so.trial_division_bound = cfg.trial_division_bound;
    so.kappa.trial_division_bound = cfg.trial_division_bound;
    SupportSets sup = build_support(tower, s.model, *s.seq, cfg.silverman_start, so);
    s.flush();
    BoundReport rep = assemble_bound(bc, tower.L, sup, sup.certificate, forms);
    std::ostringstream out;
    out << "kappa' = " << to_string(rep.kappa_prime) << "\n";
    for (const auto& f : rep.forms) {
        out << "form " << f.label << " at " << f.level << ":";
        for (const auto& p : f.result.primes) out << " " << to_string(p);
        if (f.result.residual != 1) out << " residual " << to_string(f.result.residual);
        out << "\n";
    }
    out << "levels without forms: " << rep.gaps.size() << " of " << to_string(rep.level_count) << "\n";
    out << "bound on ell: " << to_string(rep.final_bound) << "\n";
    Json in = base_inputs(cfg, s);
    in["C_L"] = to_json(bc.C_L);
    in["assume_modularity"] = bc.assume_modularity;
    in["kappa1"] = bc.kappa1 ? to_json(*bc.kappa1) : Json();
    Json fl = Json::array();
    for (const auto& f : forms) fl.push_back(f.label);
    in["forms"] = fl;
    in["silverman_start"] = cfg.silverman_start;
    Json outcome = to_json(rep);
    outcome["support"] = to_json(sup);
    emit(cfg, make_certificate("bound.exponent", in, outcome, true), out.str());
    return 0;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--curve", cfg.curve, "curve JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--cache-dir", cfg.cache_dir, "term cache directory (default: $EDSFREY_CACHE_DIR)");
    sub->add_option("--trial-bound", cfg.trial_division_bound, "trial division bound");
    sub->add_flag("--json", cfg.json, "print the JSON certificate");
    sub->add_option("--output", cfg.output, "also write the JSON certificate to this file");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Elliptic divisibility sequences, descent and Frey curves"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::function<int(const RunConfig&)> action;

    auto* eds = app.add_subcommand("eds", "divisibility sequence tools");
    eds->require_subcommand(1);
    auto* gen = eds->add_subcommand("gen", "compute B_1..B_N");
    add_common(gen, cfg);
    gen->add_option("--max-index", cfg.max_index, "largest index");
    gen->callback([&] { action = eds_gen; });

    auto* props = eds->add_subcommand("props", "strong divisibility and the valuation law");
    add_common(props, cfg);
    props->add_option("--max-index", cfg.max_index, "largest index for gcd(B_m, B_n)");
    props->add_option("--max-product", cfg.max_product, "largest nm for the valuation law (default: max-index)");
    props->callback([&] { action = eds_props; });

    auto* prim = eds->add_subcommand("primdiv", "primitive divisor cofactors");
    add_common(prim, cfg);
    prim->add_option("--from", cfg.from, "first index");
    prim->add_option("--max-index", cfg.max_index, "last index");
    prim->callback([&] { action = eds_primdiv; });

    auto* pow = eds->add_subcommand("powers", "terms that are perfect powers");
    add_common(pow, cfg);
    pow->add_option("--max-index", cfg.max_index, "last index");
    pow->add_option("--min-exponent", cfg.min_exponent, "smallest exponent reported");
    pow->callback([&] { action = eds_powers; });

    auto* cert = eds->add_subcommand("cert", "kappa / p certificate");
    add_common(cert, cfg);
    cert->add_option("--T", cfg.T, "excluded primes (default: primes of 2 Delta_E)")->delimiter(',');
    cert->add_option("--start", cfg.silverman_start, "index beyond which primitive divisors are assumed");
    cert->callback([&] { action = eds_cert; });

    auto* frey = app.add_subcommand("frey", "descent and Frey curve");
    frey->require_subcommand(1);
    auto* build = frey->add_subcommand("build", "run the descent pipeline for one index");
    add_common(build, cfg);
    build->add_option("--n", cfg.n, "index n")->required();
    build->add_option("--prime", cfg.prime, "rational prime for the sign pattern");
    build->add_option("--start", cfg.silverman_start, "index beyond which primitive divisors are assumed");
    build->add_option("--norm-bound", cfg.norm_bound, "check reduction at primes of norm up to this bound");
    build->add_flag("--explain", cfg.explain, "print every step");
    build->callback([&] { action = frey_build; });

    auto* bound = app.add_subcommand("bound", "exponent bounds");
    bound->require_subcommand(1);
    auto* expo = bound->add_subcommand("exponent", "assemble the bound on ell");
    add_common(expo, cfg);
    expo->add_option("--forms", cfg.forms, "directory of eigenform JSON files")->required();
    expo->add_option("--C_L", cfg.C_L, "irreducibility constant");
    expo->add_flag("--assume-modularity,!--no-assume-modularity", cfg.assume_modularity, "kappa1 = 0 (default on)");
    expo->add_option("--kappa1", cfg.kappa1, "kappa1 when modularity is not assumed");
    expo->add_option("--start", cfg.silverman_start, "index beyond which primitive divisors are assumed");
    expo->callback([&] { action = bound_exponent; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return action(cfg);
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        return exit_status(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
