#include "t2smc/plant.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace t2smc {

PlantModel duffing_preset() {
    PlantModel m;
    m.n = 2;
    m.name = "duffing";
    m.f_nominal = [](std::span<const double> x, double t) {
        return -0.4 * x[1] - 1.1 * x[0] - x[0] * x[0] * x[0] - 2.1 * std::cos(1.8 * t);
    };
    m.delta_f = [](std::span<const double> x, double /*t*/) {
        return (std::numbers::pi / 6.0) * std::sin(2.0 * std::numbers::pi * x[0]) *
               std::sin(3.0 * std::numbers::pi * x[1]);
    };
    m.disturbance = [](double t) { return std::sin(2.0 * t); };
    m.bounds = PlantBounds{50.0, std::numbers::pi / 6.0, 1.0};
    return m;
}

PlantModel strip_perturbations(PlantModel m, bool keep_uncertainty, bool keep_disturbance) {
    if (!keep_uncertainty) {
        m.delta_f = [](std::span<const double>, double) { return 0.0; };
        m.bounds.delta_f_bound = 0.0;
    }
    if (!keep_disturbance) {
        m.disturbance = [](double) { return 0.0; };
        m.bounds.delta_d_bound = 0.0;
    }
    return m;
}

std::vector<double> plant_derivative(const PlantModel& m, std::span<const double> x, double t,
                                     double u) {
    if (x.size() != static_cast<std::size_t>(m.n)) {
        throw std::invalid_argument("plant_derivative: state length does not match plant order");
    }
    std::vector<double> dx(x.size());
    for (std::size_t i = 0; i + 1 < x.size(); ++i) dx[i] = x[i + 1];
    dx[x.size() - 1] = m.f_nominal(x, t) + m.delta_f(x, t) + m.disturbance(t) + u;
    return dx;
}

ReferenceSignal reference_preset() {
    constexpr double a = std::numbers::pi / 3.0;
    ReferenceSignal r;
    r.y_d = [](double t) { return a * (std::sin(t) + 0.3 * std::sin(3.0 * t)); };
    r.y_d_dot = [](double t) { return a * (std::cos(t) + 0.9 * std::cos(3.0 * t)); };
    r.y_d_ddot = [](double t) { return a * (-std::sin(t) - 2.7 * std::sin(3.0 * t)); };
    return r;
}

NoiseGenerator::NoiseGenerator(const NoiseSpec& spec, std::vector<double> channel_rms)
    : rng_(spec.seed) {
    if (!spec.snr_db) return;
    const double gain = std::pow(10.0, -*spec.snr_db / 20.0);
    sigma_.reserve(channel_rms.size());
    for (double rms : channel_rms) {
        if (!(rms > 0.0)) {
            throw std::invalid_argument("NoiseGenerator: channel rms must be positive with finite SNR");
        }
        sigma_.push_back(rms * gain);
    }
}

double NoiseGenerator::standard_normal() {
    // Box-Muller over two uniforms in (0,1]; mt19937_64 output is fully
    // specified by the standard, so the stream is platform-independent.
    constexpr double inv = 1.0 / 18446744073709551616.0; // 2^-64
    const double u1 = (static_cast<double>(rng_()) + 1.0) * inv;
    const double u2 = (static_cast<double>(rng_()) + 1.0) * inv;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<double> NoiseGenerator::apply(std::span<const double> x) {
    std::vector<double> out(x.begin(), x.end());
    if (sigma_.empty()) return out;
    if (x.size() != sigma_.size()) {
        throw std::invalid_argument("NoiseGenerator: state length does not match channel count");
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += sigma_[i] * standard_normal();
    return out;
}

// --- term grammar -----------------------------------------------------------

double PlantTerm::eval(std::span<const double> x, double t) const {
    double v = coeff;
    for (std::size_t j = 0; j < powers.size(); ++j) {
        for (int p = 0; p < powers[j]; ++p) v *= x[j];
    }
    for (const auto& [is_sin, omega] : trig) {
        v *= is_sin ? std::sin(omega * t) : std::cos(omega * t);
    }
    return v;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_term(const std::string& what, const std::string& fragment) {
    throw std::invalid_argument("plant term: " + what + " in '" + fragment + "'");
}

// Factor forms: number | x<j>[^<p>] | sin(<w>*t) | cos(<w>*t).
void parse_factor(const std::string& raw, int n, PlantTerm& term, bool& saw_coeff) {
    const std::string f = trim(raw);
    if (f.empty()) bad_term("empty factor", raw);

    if (f[0] == 'x') {
        std::size_t caret = f.find('^');
        const std::string idx_str = f.substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
        std::size_t pos = 0;
        int idx = 0;
        try {
            idx = std::stoi(idx_str, &pos);
        } catch (const std::exception&) {
            bad_term("bad state index", f);
        }
        if (pos != idx_str.size() || idx < 1 || idx > n) bad_term("state index out of range", f);
        int power = 1;
        if (caret != std::string::npos) {
            const std::string pow_str = f.substr(caret + 1);
            try {
                power = std::stoi(pow_str, &pos);
            } catch (const std::exception&) {
                bad_term("bad exponent", f);
            }
            if (pos != pow_str.size() || power < 1) bad_term("bad exponent", f);
        }
        term.powers[idx - 1] += power;
        return;
    }

    if (f.rfind("sin(", 0) == 0 || f.rfind("cos(", 0) == 0) {
        if (f.back() != ')') bad_term("missing ')'", f);
        const bool is_sin = f[0] == 's';
        std::string inner = trim(f.substr(4, f.size() - 5));
        double omega = 1.0;
        if (inner != "t") {
            // Accept "<w>*t" or "<w> t".
            std::size_t t_pos = inner.rfind('t');
            if (t_pos == std::string::npos || t_pos + 1 != inner.size()) bad_term("expected trig of t", f);
            std::string w = trim(inner.substr(0, t_pos));
            if (!w.empty() && w.back() == '*') w = trim(w.substr(0, w.size() - 1));
            if (w.empty()) bad_term("bad frequency", f);
            std::size_t pos = 0;
            try {
                omega = std::stod(w, &pos);
            } catch (const std::exception&) {
                bad_term("bad frequency", f);
            }
            if (pos != w.size()) bad_term("bad frequency", f);
        }
        term.trig.emplace_back(is_sin, omega);
        return;
    }

    std::size_t pos = 0;
    double c = 0.0;
    try {
        c = std::stod(f, &pos);
    } catch (const std::exception&) {
        bad_term("unrecognised factor", f);
    }
    if (pos != f.size()) bad_term("unrecognised factor", f);
    term.coeff *= c;
    saw_coeff = true;
}

} // namespace

std::vector<PlantTerm> parse_term_sum(const std::string& text, int n) {
    std::vector<PlantTerm> terms;
    const std::string src = trim(text);
    if (src.empty()) return terms;

    // Split on top-level +/- (a sign directly after '*', '(', or at the start
    // belongs to the following number).
    std::vector<std::pair<std::string, double>> pieces; // (term text, sign)
    std::string cur;
    double sign = 1.0;
    int depth = 0;
    char prev_sig = 0;
    for (char c : src) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if ((c == '+' || c == '-') && depth == 0 && prev_sig != 0 && prev_sig != '*' &&
            prev_sig != '^' && prev_sig != 'e' && prev_sig != 'E') {
            pieces.emplace_back(cur, sign);
            cur.clear();
            sign = c == '-' ? -1.0 : 1.0;
            prev_sig = 0;
            continue;
        }
        if (cur.empty() && (c == '+' || c == '-')) {
            sign *= c == '-' ? -1.0 : 1.0;
            prev_sig = 0;
            continue;
        }
        cur.push_back(c);
        if (!std::isspace(static_cast<unsigned char>(c))) prev_sig = c;
    }
    pieces.emplace_back(cur, sign);

    for (const auto& [piece, piece_sign] : pieces) {
        const std::string body = trim(piece);
        if (body.empty()) bad_term("empty term", text);
        PlantTerm term;
        term.coeff = piece_sign;
        term.powers.assign(static_cast<std::size_t>(n), 0);
        bool saw_coeff = false;
        std::string factor;
        int fdepth = 0;
        for (char c : body) {
            if (c == '(') ++fdepth;
            if (c == ')') --fdepth;
            if (c == '*' && fdepth == 0) {
                parse_factor(factor, n, term, saw_coeff);
                factor.clear();
            } else {
                factor.push_back(c);
            }
        }
        parse_factor(factor, n, term, saw_coeff);
        (void)saw_coeff;
        terms.push_back(std::move(term));
    }
    return terms;
}

std::function<double(std::span<const double>, double)> compile_terms(std::vector<PlantTerm> terms) {
    return [terms = std::move(terms)](std::span<const double> x, double t) {
        double acc = 0.0;
        for (const PlantTerm& term : terms) acc += term.eval(x, t);
        return acc;
    };
}

PlantModel custom_plant(int n, const std::string& f_terms, const std::string& delta_f_terms,
                        const std::string& d_terms, PlantBounds bounds) {
    if (n < 2) throw std::invalid_argument("custom_plant: requires order n >= 2");
    PlantModel m;
    m.n = n;
    m.name = "custom";
    m.bounds = bounds;
    m.f_nominal = compile_terms(parse_term_sum(f_terms, n));
    m.delta_f = compile_terms(parse_term_sum(delta_f_terms, n));
    auto d_parsed = parse_term_sum(d_terms, n);
    for (const PlantTerm& term : d_parsed) {
        for (int p : term.powers) {
            if (p != 0) throw std::invalid_argument("custom_plant: disturbance terms may only depend on t");
        }
    }
    auto d = compile_terms(std::move(d_parsed));
    m.disturbance = [d = std::move(d)](double t) {
        const double no_state[1] = {0.0};
        return d(std::span<const double>(no_state, 0), t);
    };
    return m;
}

PlantModel plant_by_name(const std::string& name) {
    if (name == "duffing") return duffing_preset();
    throw std::invalid_argument("unknown plant preset '" + name + "'");
}

} // namespace t2smc
