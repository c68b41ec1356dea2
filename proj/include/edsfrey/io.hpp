#pragma once

// File formats, the on-disk term cache and JSON rendering of reports.
// Integers are always written as decimal strings.

#include "edsfrey/bound.hpp"
#include "edsfrey/eds.hpp"
#include "edsfrey/frey.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace edsfrey {

using Json = nlohmann::ordered_json;

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

struct CurveInput {
    std::array<Integer, 5> a;
    Rational x, y;
    std::string name;

    WeierstrassModel model() const { return WeierstrassModel::create(a); }
    RationalPoint point() const { return RationalPoint::affine(x, y); }
};

// {"a": [a1,a2,a3,a4,a6], "point": {"x": "p/q", "y": "r/s"}}; entries are
// decimal strings (plain JSON integers are accepted too).
CurveInput parse_curve(const std::string& text);
CurveInput load_curve(const std::filesystem::path& path);

// {"label", "hecke_poly": [c0..cd], "level": [{"prime", "exp"}],
//  "ap": [{"prime", "norm", "coords": [...]}]}
EigenformData parse_eigenform(const std::string& text);
// Every *.json file of the directory, in file-name order.
std::vector<EigenformData> load_forms(const std::filesystem::path& dir);

// Persistent B_n cache, one file per curve hash:
//   # edsfrey-cache v1 <hash>
//   n A B C
//   ...
//   # end <count> <digest of the body>
// The directory is held under an exclusive lock for the object's lifetime.
class TermCache {
public:
    explicit TermCache(std::filesystem::path dir);
    ~TermCache();
    TermCache(const TermCache&) = delete;
    TermCache& operator=(const TermCache&) = delete;

    // EDSFREY_CACHE_DIR, when set and nonempty.
    static std::optional<std::filesystem::path> from_environment();

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path file_for(const EDSequence& seq) const;

    // Number of terms imported; cache_corrupt on any mismatch.
    std::size_t load(EDSequence& seq) const;
    void store(const EDSequence& seq) const;

private:
    std::filesystem::path dir_;
    int lock_fd_ = -1;
};

Json to_json(const Integer& x);
Json to_json(const Rational& x);
Json to_json(const AlgebraicNumber& a);
Json to_json(const PrimeIdealData& q);
Json to_json(const KappaCertificate& c);
Json to_json(const StrongDivisibilityReport& r);
Json to_json(const ValuationGridReport& r);
Json to_json(const PrimitiveDivisorReport& r);
Json to_json(const PowerInstance& p);
Json to_json(const FieldTower& t);
Json to_json(const SupportSets& s);
Json to_json(const DescentTriple& t);
Json to_json(const GcdSupportReport& r);
Json to_json(const ScaledTriple& s);
Json to_json(const FreyCurve& f);
Json to_json(const PropReport& r);
Json to_json(const PipelineResult& r);
Json to_json(const BoundReport& r);
Json to_json(const CurveInput& c);

// Build and library versions; independent of the host and the clock.
Json environment_fingerprint();

// {"certificate", "passed", "inputs", "outcome", "environment", "timestamp"}.
// SOURCE_DATE_EPOCH, when set, fixes the timestamp.
Json make_certificate(const std::string& kind, Json inputs, Json outcome, bool passed);

// Copy without the "timestamp" field, for reproducibility comparisons.
Json without_timestamp(Json cert);

}  // namespace edsfrey
