#include "svarpg/model.hpp"

#include "svarpg/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace svarpg {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorKind::Schema, what); }
[[noreturn]] void semantic_error(const std::string& what) { throw Error(ErrorKind::Semantic, what); }

std::vector<std::string> read_names(const json& doc, const char* key, bool required) {
    if (!doc.contains(key)) {
        if (required) schema_error(std::string("missing field '") + key + "'");
        return {};
    }
    const json& arr = doc.at(key);
    if (!arr.is_array()) schema_error(std::string("field '") + key + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& v : arr) {
        if (!v.is_string()) schema_error(std::string("field '") + key + "' must be an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

}  // namespace

SvarModel::SvarModel(std::vector<std::string> observed, std::vector<std::string> latents, int order,
                     const std::vector<Edge>& edges, const std::map<std::string, double>& noise_var)
    : observed_(std::move(observed)), latents_(std::move(latents)), order_(order) {
    if (order_ < 0) semantic_error("order must be non-negative");
    names_ = observed_;
    names_.insert(names_.end(), latents_.begin(), latents_.end());
    std::set<std::string> seen;
    for (const auto& n : names_) {
        if (n.empty()) semantic_error("process names must be non-empty");
        if (!seen.insert(n).second) semantic_error("duplicate process name '" + n + "'");
    }

    for (const auto& e : edges) {
        auto from = find(e.from);
        auto to = find(e.to);
        if (!from) semantic_error("edge references unknown process '" + e.from + "'");
        if (!to) semantic_error("edge references unknown process '" + e.to + "'");
        if (e.lag < 0 || e.lag > order_)
            semantic_error("edge " + e.from + "->" + e.to + " has lag " + std::to_string(e.lag) +
                           " outside 0.." + std::to_string(order_));
        if (!std::isfinite(e.coeff)) semantic_error("edge " + e.from + "->" + e.to + " has a non-finite coefficient");
        if (*from == *to && e.lag == 0) semantic_error("contemporaneous self-loop on '" + e.from + "'");
        if (!is_latent(*from) && is_latent(*to))
            semantic_error("edge from observed '" + e.from + "' into latent '" + e.to + "'");
        if (!coeffs_.emplace(Key{*from, *to, e.lag}, e.coeff).second)
            semantic_error("duplicate edge " + e.from + "->" + e.to + " at lag " + std::to_string(e.lag));
    }

    noise_var_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(names_.size()));
    for (const auto& [n, v] : noise_var) {
        auto idx = find(n);
        if (!idx) semantic_error("noise variance given for unknown process '" + n + "'");
        if (!(v > 0.0) || !std::isfinite(v)) semantic_error("noise variance of '" + n + "' must be positive");
        noise_var_(static_cast<Eigen::Index>(*idx)) = v;
    }
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (!noise_var.count(names_[i])) semantic_error("missing noise variance for '" + names_[i] + "'");

    rebuild_dense();
}

void SvarModel::rebuild_dense() {
    const auto n = static_cast<Eigen::Index>(names_.size());
    phi_.assign(static_cast<std::size_t>(order_) + 1, Eigen::MatrixXd::Zero(n, n));
    zero_ = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [key, c] : coeffs_) {
        const auto& [from, to, lag] = key;
        phi_[static_cast<std::size_t>(lag)](static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(to)) = c;
    }
}

SvarModel SvarModel::from_json(const json& doc) {
    if (!doc.is_object()) schema_error("model document must be a JSON object");
    auto observed = read_names(doc, "observed", true);
    auto latents = read_names(doc, "latents", false);

    if (!doc.contains("order")) schema_error("missing field 'order'");
    const json& ord = doc.at("order");
    if (!ord.is_number_integer()) schema_error("field 'order' must be an integer");
    const auto order = ord.get<long long>();
    if (order < 0 || order > 100000) schema_error("field 'order' out of range");

    std::vector<Edge> edges;
    if (doc.contains("edges")) {
        const json& arr = doc.at("edges");
        if (!arr.is_array()) schema_error("field 'edges' must be an array");
        for (const auto& e : arr) {
            if (!e.is_object()) schema_error("each edge must be an object");
            for (const char* k : {"from", "to", "lag", "coeff"})
                if (!e.contains(k)) schema_error(std::string("edge missing field '") + k + "'");
            if (!e.at("from").is_string() || !e.at("to").is_string())
                schema_error("edge endpoints must be strings");
            if (!e.at("lag").is_number_integer()) schema_error("edge lag must be an integer");
            if (!e.at("coeff").is_number()) schema_error("edge coeff must be a number");
            const auto lag = e.at("lag").get<long long>();
            if (lag < 0 || lag > order)
                semantic_error("edge lag " + std::to_string(lag) + " outside 0.." + std::to_string(order));
            edges.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>(), static_cast<int>(lag),
                             e.at("coeff").get<double>()});
        }
    }

    if (!doc.contains("noise_var")) schema_error("missing field 'noise_var'");
    const json& nv = doc.at("noise_var");
    if (!nv.is_object()) schema_error("field 'noise_var' must be an object");
    std::map<std::string, double> noise;
    for (const auto& [k, v] : nv.items()) {
        if (!v.is_number()) schema_error("noise variance of '" + k + "' must be a number");
        noise[k] = v.get<double>();
    }
    return SvarModel(std::move(observed), std::move(latents), static_cast<int>(order), edges, noise);
}

SvarModel SvarModel::parse(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        schema_error(std::string("malformed JSON: ") + e.what());
    }
    return from_json(doc);
}

SvarModel SvarModel::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) schema_error("cannot read model file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

json SvarModel::to_json() const {
    json doc;
    doc["observed"] = observed_;
    doc["latents"] = latents_;
    doc["order"] = order_;
    json edges = json::array();
    for (const auto& e : this->edges())
        edges.push_back({{"from", e.from}, {"to", e.to}, {"lag", e.lag}, {"coeff", e.coeff}});
    doc["edges"] = std::move(edges);
    json nv = json::object();
    for (std::size_t i = 0; i < names_.size(); ++i) nv[names_[i]] = noise_var(i);
    doc["noise_var"] = std::move(nv);
    return doc;
}

std::string SvarModel::serialize() const { return to_json().dump(2); }

std::optional<std::size_t> SvarModel::find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return i;
    return std::nullopt;
}

std::size_t SvarModel::index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw Error(ErrorKind::UnknownProcess, "unknown process '" + std::string(name) + "'");
}

double SvarModel::coeff(std::size_t from, std::size_t to, int lag) const {
    auto it = coeffs_.find(Key{from, to, lag});
    return it == coeffs_.end() ? 0.0 : it->second;
}

const Eigen::MatrixXd& SvarModel::phi(int lag) const {
    if (lag < 0 || lag > order_) return zero_;
    return phi_[static_cast<std::size_t>(lag)];
}

std::vector<double> SvarModel::auto_coeffs(std::size_t v) const {
    std::vector<double> a(static_cast<std::size_t>(order_), 0.0);
    for (int k = 1; k <= order_; ++k) a[static_cast<std::size_t>(k - 1)] = coeff(v, v, k);
    return a;
}

std::vector<double> SvarModel::cross_coeffs(std::size_t from, std::size_t to) const {
    std::vector<double> b(static_cast<std::size_t>(order_) + 1, 0.0);
    for (int k = 0; k <= order_; ++k) b[static_cast<std::size_t>(k)] = coeff(from, to, k);
    return b;
}

bool SvarModel::has_link(std::size_t from, std::size_t to) const {
    for (int k = 0; k <= order_; ++k)
        if (coeff(from, to, k) != 0.0) return true;
    return false;
}

std::vector<Edge> SvarModel::edges() const {
    std::vector<Edge> out;
    out.reserve(coeffs_.size());
    for (const auto& [key, c] : coeffs_) {
        const auto& [from, to, lag] = key;
        out.push_back({names_[from], names_[to], lag, c});
    }
    return out;
}

SvarModel SvarModel::without_edges_into(const std::vector<std::size_t>& targets) const {
    SvarModel copy = *this;
    std::erase_if(copy.coeffs_, [&](const auto& kv) {
        const auto& [from, to, lag] = kv.first;
        return from != to && std::find(targets.begin(), targets.end(), to) != targets.end();
    });
    copy.rebuild_dense();
    return copy;
}

SvarModel SvarModel::with_noise_vars(const Eigen::VectorXd& variances) const {
    if (variances.size() != noise_var_.size())
        throw Error(ErrorKind::DimensionMismatch, "noise variance vector has wrong length");
    for (Eigen::Index i = 0; i < variances.size(); ++i)
        if (!(variances(i) >= 0.0) || !std::isfinite(variances(i)))
            semantic_error("noise variances must be non-negative and finite");
    SvarModel copy = *this;
    copy.noise_var_ = variances;
    return copy;
}

bool operator==(const SvarModel& a, const SvarModel& b) {
    return a.observed_ == b.observed_ && a.latents_ == b.latents_ && a.order_ == b.order_ &&
           a.coeffs_ == b.coeffs_ && a.noise_var_ == b.noise_var_;
}

bool StabilityReport::loop_gains_below_one() const {
    return std::all_of(loop_gain_max.begin(), loop_gain_max.end(),
                       [](const auto& kv) { return kv.second < 1.0 - kLoopGainTolerance; });
}

bool StabilityReport::sep_representable() const {
    if (!var_stable || !satisfies_auto_sum_bound) return false;
    return satisfies_absolute_sum_bound || (loop_gains_evaluated && loop_gains_below_one());
}

nlohmann::json StabilityReport::to_json() const {
    json doc;
    json sums = json::object();
    for (const auto& [n, s] : per_process_auto_sum) sums[n] = s;
    doc["per_process_auto_sum"] = std::move(sums);
    doc["satisfies_auto_sum_bound"] = satisfies_auto_sum_bound;
    doc["satisfies_absolute_sum_bound"] = satisfies_absolute_sum_bound;
    doc["absolute_coefficient_sum"] = absolute_coefficient_sum;
    doc["char_poly_min_modulus_margin"] = char_poly_min_modulus_margin;
    doc["companion_spectral_radius"] = companion_spectral_radius;
    doc["var_stable"] = var_stable;
    if (loop_gains_evaluated) doc["loop_gain_max"] = loop_gain_max;
    doc["sep_representable"] = sep_representable();
    doc["warnings"] = warnings;
    return doc;
}

Eigen::MatrixXd contemporaneous_inverse(const SvarModel& model) {
    const auto n = static_cast<Eigen::Index>(model.num_processes());
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - model.phi(0).transpose();
    if (n == 0) return a;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || sv(0) / smin > kContemporaneousConditionLimit)
        throw Error(ErrorKind::SingularContemporaneous, "I - Phi(0)^T is numerically singular");
    return a.inverse();
}

StabilityReport check_stability(const SvarModel& model, int grid_size) {
    if (grid_size <= 0) throw Error(ErrorKind::Semantic, "grid_size must be positive");
    const std::size_t n = model.num_processes();
    const int p = model.order();
    const Eigen::MatrixXd inv = contemporaneous_inverse(model);

    StabilityReport rep;
    rep.satisfies_auto_sum_bound = true;
    for (std::size_t v = 0; v < n; ++v) {
        double s = 0.0;
        for (double a : model.auto_coeffs(v)) s += std::abs(a);
        rep.per_process_auto_sum.emplace_back(model.name(v), s);
        if (!(s < 1.0)) rep.satisfies_auto_sum_bound = false;
    }
    for (const auto& e : model.edges()) rep.absolute_coefficient_sum += std::abs(e.coeff);
    rep.satisfies_absolute_sum_bound = rep.absolute_coefficient_sum < 1.0;

    // Stacked VAR(1) companion form of X(t) = sum_k A_k X(t-k) + noise.
    const auto ni = static_cast<Eigen::Index>(n);
    if (p > 0 && n > 0) {
        Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(ni * p, ni * p);
        for (int k = 1; k <= p; ++k) comp.block(0, ni * (k - 1), ni, ni) = inv * model.phi(k).transpose();
        if (p > 1) comp.block(ni, 0, ni * (p - 1), ni * (p - 1)).setIdentity();
        Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
        rep.companion_spectral_radius = es.eigenvalues().cwiseAbs().maxCoeff();
    }

    // |det(I - sum_k Phi(k)^T z^k)| on the unit circle and along radial rays.
    constexpr int kRadii = 16;
    double margin = std::numeric_limits<double>::infinity();
    std::vector<Eigen::MatrixXcd> phit;
    for (int k = 0; k <= p; ++k) phit.emplace_back(model.phi(k).transpose().cast<std::complex<double>>());
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(ni, ni);
    auto det_at = [&](std::complex<double> z) {
        Eigen::MatrixXcd m = eye;
        std::complex<double> zk(1.0, 0.0);
        for (int k = 0; k <= p; ++k) {
            m -= zk * phit[static_cast<std::size_t>(k)];
            zk *= z;
        }
        return std::abs(m.determinant());
    };
    if (n == 0) {
        margin = 1.0;
    } else {
        margin = det_at(0.0);
        for (int j = 0; j < grid_size; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / grid_size;
            const std::complex<double> dir = std::polar(1.0, theta);
            for (int r = 1; r <= kRadii; ++r) margin = std::min(margin, det_at(dir * (double(r) / kRadii)));
        }
    }
    rep.char_poly_min_modulus_margin = margin;
    rep.var_stable =
        rep.companion_spectral_radius < 1.0 - kCompanionRadiusTolerance && margin > kCharPolyMarginTolerance;

    if (!rep.var_stable) rep.warnings.emplace_back("VAR process is not stable");
    if (!rep.satisfies_auto_sum_bound)
        rep.warnings.emplace_back("auto-dependency sum reaches 1 for some process; edge transfers may be singular");
    if (rep.satisfies_auto_sum_bound && !rep.satisfies_absolute_sum_bound)
        rep.warnings.emplace_back("absolute coefficient sum >= 1; convergence relies on cycle loop gains");
    return rep;
}

}  // namespace svarpg
