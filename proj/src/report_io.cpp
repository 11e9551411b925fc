#include "zigzag/report_io.hpp"

#include "zigzag/errors.hpp"

#include <cmath>
#include <fmt/format.h>

namespace zigzag {

using nlohmann::json;

std::string fmt17(double x)
{
    return fmt::format("{:.17g}", x);
}

Potential potential_from_json(const json& j, const std::string& where)
{
    if (!j.is_object())
        throw ValidationError(fmt::format("{}: expected an object", where));
    if (!j.contains("type") || !j["type"].is_string())
        throw ValidationError(fmt::format("{}/type: expected \"piecewise\" or \"samples\"", where));
    const auto type = j["type"].get<std::string>();
    if (type == "piecewise") {
        if (!j.contains("segments") || !j["segments"].is_array())
            throw ValidationError(fmt::format("{}/segments: expected an array of [width, value] pairs", where));
        std::vector<Segment> segs;
        for (std::size_t i = 0; i < j["segments"].size(); ++i) {
            const auto& s = j["segments"][i];
            if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number())
                throw ValidationError(fmt::format("{}/segments/{}: expected [width, value]", where, i));
            segs.push_back({s[0].get<double>(), s[1].get<double>()});
        }
        try {
            return Potential::piecewise(std::move(segs));
        } catch (const ValidationError& e) {
            throw ValidationError(fmt::format("{}: {}", where, e.what()));
        }
    }
    if (type == "samples") {
        if (!j.contains("values") || !j["values"].is_array())
            throw ValidationError(fmt::format("{}/values: expected an array of numbers", where));
        std::vector<double> v;
        for (std::size_t i = 0; i < j["values"].size(); ++i) {
            if (!j["values"][i].is_number())
                throw ValidationError(fmt::format("{}/values/{}: expected a number", where, i));
            v.push_back(j["values"][i].get<double>());
        }
        try {
            return Potential::samples(std::move(v));
        } catch (const ValidationError& e) {
            throw ValidationError(fmt::format("{}: {}", where, e.what()));
        }
    }
    if (type == "fourier") {
        // constant + sum_m cos[m-1] cos(2 pi m t) + sin[m-1] sin(2 pi m t), sampled
        auto coeffs = [&](const char* key) {
            std::vector<double> c;
            if (!j.contains(key))
                return c;
            if (!j[key].is_array())
                throw ValidationError(fmt::format("{}/{}: expected an array of numbers", where, key));
            for (std::size_t i = 0; i < j[key].size(); ++i) {
                if (!j[key][i].is_number())
                    throw ValidationError(fmt::format("{}/{}/{}: expected a number", where, key, i));
                c.push_back(j[key][i].get<double>());
            }
            return c;
        };
        const auto cs = coeffs("cos"), ss = coeffs("sin");
        double c0 = 0.0;
        if (j.contains("constant")) {
            if (!j["constant"].is_number())
                throw ValidationError(fmt::format("{}/constant: expected a number", where));
            c0 = j["constant"].get<double>();
        }
        std::size_t n = 1025;
        if (j.contains("samples")) {
            if (!j["samples"].is_number_integer() || j["samples"].get<long long>() < 2)
                throw ValidationError(fmt::format("{}/samples: expected an integer >= 2", where));
            n = j["samples"].get<std::size_t>();
        }
        return Potential::sampled(
            [&](double t) {
                double v = c0;
                for (std::size_t m = 0; m < cs.size(); ++m)
                    v += cs[m] * std::cos(2.0 * kPi * static_cast<double>(m + 1) * t);
                for (std::size_t m = 0; m < ss.size(); ++m)
                    v += ss[m] * std::sin(2.0 * kPi * static_cast<double>(m + 1) * t);
                return v;
            },
            n);
    }
    throw ValidationError(fmt::format("{}/type: unknown potential type \"{}\"", where, type));
}

json to_json(const Potential& q)
{
    if (q.is_piecewise()) {
        json segs = json::array();
        for (const auto& s : q.segments())
            segs.push_back({s.width, s.value});
        return {{"type", "piecewise"}, {"segments", segs}};
    }
    return {{"type", "samples"}, {"values", q.values()}};
}

json to_json(const RootList& r)
{
    json roots = json::array();
    for (const auto& x : r.roots)
        roots.push_back({{"lambda", x.lambda}, {"kind", x.kind == RootKind::simple ? "simple" : "double-tangent"}});
    return {{"c", r.c}, {"roots", roots}};
}

json to_json(const SpectrumReport& r)
{
    json channels = json::array();
    for (const auto& c : r.channels) {
        json bands = json::array();
        for (const auto& b : c.bands)
            bands.push_back({{"n", b.n}, {"lo", b.lo}, {"hi", b.hi}, {"lo_kind", to_string(b.lo_kind)},
                             {"hi_kind", to_string(b.hi_kind)}});
        json nf = json::array();
        for (const auto& p : c.near_flat)
            nf.push_back({{"lambda_tilde", p.lambda_tilde}, {"offset", p.offset}});
        json ch = {{"k", c.ch.k},
                   {"c_k", c.ch.c},
                   {"s_k", c.ch.s},
                   {"singular", c.ch.singular},
                   {"near_flat", c.ch.near_flat},
                   {"bands", bands},
                   {"flat_points", c.flat_points},
                   {"near_flat_predictions", nf}};
        if (!c.ch.singular) {
            ch["resonances"] = {{"even", to_json(c.resonances.even)}, {"odd", to_json(c.resonances.odd)}};
            ch["periodic"] = to_json(c.periodic);
            ch["antiperiodic"] = to_json(c.antiperiodic);
        }
        channels.push_back(ch);
    }
    json ub = json::array();
    for (const auto& u : r.union_bands)
        ub.push_back({{"n", u.n}, {"lo", u.lo}, {"hi", u.hi}});
    json gaps = json::array();
    for (const auto& g : r.gaps)
        gaps.push_back({{"n", g.n}, {"lo", g.lo}, {"hi", g.hi}, {"closed", g.closed}});
    return {{"N", r.N},
            {"B", r.B},
            {"a", r.a},
            {"q_digest", r.q_digest},
            {"window", {r.window.lo, r.window.hi}},
            {"channels", channels},
            {"dirichlet_points", r.dirichlet_points},
            {"union_bands", ub},
            {"gaps", gaps}};
}

json to_json(const CompactEigenfunction& psi, double residual)
{
    json support = json::array();
    for (const auto& [e, c] : psi.support)
        support.push_back({{"n", e.n},
                           {"j", e.j},
                           {"alpha", {c.alpha.real(), c.alpha.imag()}},
                           {"beta", {c.beta.real(), c.beta.imag()}}});
    return {{"lambda", psi.lambda},
            {"N", psi.ch.N},
            {"k", psi.ch.k},
            {"a", psi.ch.a},
            {"kind", to_string(psi.kind)},
            {"eta", {psi.eta.real(), psi.eta.imag()}},
            {"kirchhoff_residual", residual},
            {"support", support}};
}

void write_bands_csv(std::ostream& os, const std::vector<SpectrumReport>& reports)
{
    os << "B,a,k,n,lo,hi,kind\n";
    for (const auto& r : reports) {
        const auto B = fmt17(r.B), a = fmt17(r.a);
        for (const auto& c : r.channels) {
            for (const auto& b : c.bands)
                os << B << ',' << a << ',' << c.ch.k << ',' << b.n << ',' << fmt17(b.lo) << ',' << fmt17(b.hi) << ','
                   << to_string(b.lo_kind) << ':' << to_string(b.hi_kind) << '\n';
            for (std::size_t i = 0; i < c.flat_points.size(); ++i)
                os << B << ',' << a << ',' << c.ch.k << ',' << i + 1 << ',' << fmt17(c.flat_points[i]) << ','
                   << fmt17(c.flat_points[i]) << ",flat\n";
        }
        for (const auto& u : r.union_bands)
            os << B << ',' << a << ",all," << u.n << ',' << fmt17(u.lo) << ',' << fmt17(u.hi) << ",union\n";
    }
}

void write_gaps_csv(std::ostream& os, const std::vector<SpectrumReport>& reports)
{
    os << "B,a,n,lo,hi,length,closed\n";
    for (const auto& r : reports)
        for (const auto& g : r.gaps)
            os << fmt17(r.B) << ',' << fmt17(r.a) << ',' << g.n << ',' << fmt17(g.lo) << ',' << fmt17(g.hi) << ','
               << fmt17(g.length()) << ',' << (g.closed ? 1 : 0) << '\n';
}

void write_flat_points_csv(std::ostream& os, const std::vector<SpectrumReport>& reports)
{
    os << "B,a,k,lambda,kind\n";
    for (const auto& r : reports) {
        for (const auto& c : r.channels)
            for (double x : c.flat_points)
                os << fmt17(r.B) << ',' << fmt17(r.a) << ',' << c.ch.k << ',' << fmt17(x) << ",antiperiodic-flat\n";
        for (double x : r.dirichlet_points)
            os << fmt17(r.B) << ',' << fmt17(r.a) << ",all," << fmt17(x) << ",dirichlet\n";
    }
}

void write_discriminant_csv(std::ostream& os, const std::vector<DiscriminantRow>& rows,
                            const std::vector<ChannelParams>& channels)
{
    os << "lambda,F";
    for (const auto& c : channels)
        os << fmt::format(",T_{0},R_{0},ReF+_{0},ImF+_{0},ReF-_{0},ImF-_{0}", c.k);
    os << '\n';
    for (const auto& r : rows) {
        os << fmt17(r.lambda) << ',' << fmt17(r.F);
        for (const auto& v : r.channels)
            os << ',' << fmt17(v.T) << ',' << fmt17(v.R) << ',' << fmt17(v.F_plus.real()) << ','
               << fmt17(v.F_plus.imag()) << ',' << fmt17(v.F_minus.real()) << ',' << fmt17(v.F_minus.imag());
        os << '\n';
    }
}

void write_eigenfunction_csv(std::ostream& os, const std::vector<EigenSample>& samples)
{
    os << "n,j,t,re_f,im_f\n";
    for (const auto& s : samples)
        os << s.n << ',' << s.j << ',' << fmt17(s.t) << ',' << fmt17(s.f.real()) << ',' << fmt17(s.f.imag()) << '\n';
}

void write_band_traces(std::ostream& os, const SweepResult& sweep)
{
    for (const auto& t : sweep.tracks) {
        os << "# k=" << (t.k < 0 ? std::string("all") : std::to_string(t.k)) << " n=" << t.n << '\n';
        for (std::size_t i = 0; i < sweep.B.size(); ++i)
            if (!std::isnan(t.lo[i]))
                os << fmt17(sweep.B[i]) << ' ' << fmt17(t.lo[i]) << ' ' << fmt17(t.hi[i]) << '\n';
        os << "\n\n";
    }
}

} // namespace zigzag
