#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ramify/bounds.hpp"
#include "ramify/classfield.hpp"
#include "ramify/errors.hpp"
#include "ramify/herbrand.hpp"
#include "ramify/localfields.hpp"
#include "ramify/ramgroups.hpp"

using namespace ramify;
using json = nlohmann::ordered_json;

namespace {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Output {
    json doc;
    std::optional<Table> table;
};

// ---------------------------------------------------------------------------
// argument parsing

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    if (text.empty()) return parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    if (text.back() == sep) parts.emplace_back();
    return parts;
}

std::int64_t parse_int(const std::string& text, const char* what) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw input_error("bad_arguments", std::string("malformed ") + what + " '" + text + "'");
    return v;
}

std::vector<std::int64_t> parse_int_list(const std::string& text, const char* what) {
    std::vector<std::int64_t> out;
    for (const auto& part : split(text, ',')) out.push_back(parse_int(part, what));
    return out;
}

std::vector<int> parse_small_list(const std::string& text, const char* what) {
    std::vector<int> out;
    for (std::int64_t v : parse_int_list(text, what)) {
        if (v < -1000000 || v > 1000000) throw input_error("bad_arguments", std::string(what) + " out of range");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

// ---------------------------------------------------------------------------
// serialization helpers

json to_json(const HerbrandMap& map) {
    json out = json::array();
    for (const auto& s : map.segments()) out.push_back({{"start", s.start.to_string()}, {"slope", s.slope.to_string()}});
    return out;
}

json rationals(const std::vector<Rational>& v) {
    json out = json::array();
    for (const auto& r : v) out.push_back(r.to_string());
    return out;
}

std::string modulus_string(const BaseField& base, const Modulus& m) {
    std::string out;
    for (const auto& [P, k] : m) {
        if (!out.empty()) out += "*";
        out += base.descriptor(P) + "^" + std::to_string(k);
    }
    return out.empty() ? "1" : out;
}

std::string indexed_set_string(const BaseField& base, const IndexedSet& S) {
    std::string out;
    for (const auto& ip : S) {
        if (!out.empty()) out += ",";
        out += base.descriptor(ip.prime) + ":" + ip.nu.to_string();
    }
    return out;
}

// "54 27x2 9x6": run-length form of an order list
std::string runs(const std::vector<std::int64_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        out += (i ? " " : "") + std::to_string(v[i]) + (j - i > 1 ? "x" + std::to_string(j - i) : "");
        i = j;
    }
    return out;
}

std::string cell(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

Table flatten(const json& doc) {
    Table t;
    if (!doc.is_object()) {
        t.header = {"value"};
        t.rows = {{cell(doc)}};
        return t;
    }
    t.rows.emplace_back();
    for (const auto& [k, v] : doc.items()) {
        t.header.push_back(k);
        t.rows.back().push_back(cell(v));
    }
    return t;
}

void write_csv(std::ostream& os, const Table& t) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
        os << "\r\n";
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
}

void write_text(std::ostream& os, const Output& out) {
    if (!out.doc.is_object() && !out.doc.is_array()) {
        os << cell(out.doc) << "\n";
        return;
    }
    if (!out.table) {
        for (const auto& [k, v] : out.doc.items()) os << k << ": " << cell(v) << "\n";
        return;
    }
    const Table& t = *out.table;
    std::vector<std::size_t> width(t.header.size());
    for (std::size_t i = 0; i < t.header.size(); ++i) width[i] = t.header[i].size();
    for (const auto& r : t.rows)
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            s += cells[i];
            if (i + 1 < cells.size()) s += std::string(width[i] - cells[i].size() + 2, ' ');
        }
        os << s << "\n";
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
}

void emit(const Output& out, const std::string& format) {
    if (format == "json") {
        std::cout << out.doc.dump() << "\n";
    } else if (format == "csv") {
        write_csv(std::cout, out.table ? *out.table : flatten(out.doc));
    } else {
        write_text(std::cout, out);
    }
}

void fail(const std::string& code, const std::string& message) {
    std::cerr << json{{"code", code}, {"message", message}}.dump() << "\n";
}

// ---------------------------------------------------------------------------
// subcommands

struct HerbrandArgs {
    std::string orders;
    std::string eval;
    bool psi = false;
};

Output run_herbrand(const HerbrandArgs& a) {
    const Filtration filt(parse_int_list(a.orders, "orders"));
    const HerbrandMap phi = phi_from_filtration(filt);
    const HerbrandMap psi = psi_from_filtration(filt);
    if (!a.eval.empty()) return {json(evaluate(a.psi ? psi : phi, Rational::parse(a.eval)).to_string()), {}};

    Output out;
    out.doc = {{"orders", filt.orders()},
               {"phi", to_json(phi)},
               {"psi", to_json(psi)},
               {"lower_jumps", filt.lower_jumps()},
               {"upper_jumps", rationals(upper_jumps(filt))},
               {"different_valuation", different_valuation(filt)}};
    Table t{{"map", "start", "slope", "value"}, {}};
    for (const auto* m : {&phi, &psi})
        for (std::size_t i = 0; i < m->segments().size(); ++i)
            t.rows.push_back({m == &phi ? "phi" : "psi", m->segments()[i].start.to_string(),
                              m->segments()[i].slope.to_string(), m->value_at_start(i).to_string()});
    out.table = t;
    return out;
}

struct FiltrationArgs {
    std::string name;
    std::string catalog;
    std::string depths = "1,2,3";
};

Output run_filtration(const FiltrationArgs& a) {
    const CatalogEntry entry = catalog_entry(a.name, a.catalog);
    const Filtration filt = filtration_of(entry);
    json depth = json::array();
    Table t{{"y", "depth_at_most"}, {}};
    for (const auto& y : split(a.depths, ',')) {
        const DepthIndex d = DepthIndex::parse(y);
        const bool at_most = is_depth_at_most(filt, d);
        depth.push_back({{"y", d.to_string()}, {"at_most", at_most}});
        t.rows.push_back({d.to_string(), at_most ? "true" : "false"});
    }
    Output out;
    out.doc = {{"name", entry.name},
               {"kind", entry.kind},
               {"filtration", filt.orders()},
               {"different_valuation", different_valuation(filt)},
               {"lower_jumps", filt.lower_jumps()},
               {"upper_jumps", rationals(upper_jumps(filt))},
               {"depth", depth}};
    return out;
}

struct LocalRankArgs {
    std::string tag = "Qp";
    std::int64_t p = 2;
    std::int64_t param = 0;
    std::string nu = "1";
};

Output run_localrank(const LocalRankArgs& a) {
    const LocalFieldSpec spec = make_local_field(parse_local_tag(a.tag), a.p, a.param);
    json rows = json::array();
    Table t{{"nu", "p_rank", "delta_nu"}, {}};
    for (const auto& text : split(a.nu, ',')) {
        const DepthIndex nu = DepthIndex::parse(text);
        const int rank = prank_u1_mod_unu(spec, nu);
        const int dnu = delta_p_nu(spec, nu);
        rows.push_back({{"nu", nu.to_string()}, {"p_rank", rank}, {"delta_nu", dnu}});
        t.rows.push_back({nu.to_string(), std::to_string(rank), std::to_string(dnu)});
    }
    Output out;
    out.doc = {{"field", {{"tag", to_string(spec.tag)}, {"p", spec.p}, {"param", spec.param}}},
               {"name", spec.name()},
               {"e", spec.e},
               {"f", spec.f},
               {"delta", delta_p(spec)},
               {"ranks", rows}};
    out.table = t;
    return out;
}

json ray_class_json(const BaseField& base, const RayClassResult& r) {
    return {{"modulus", modulus_string(base, r.modulus)},
            {"invariants", r.full.invariants()},
            {"p_part", r.p_part.invariants()},
            {"p_rank", r.p_rank},
            {"residue_units", r.residue_units},
            {"unit_image", r.unit_image}};
}

struct ClassGroupArgs {
    std::int64_t D = -23;
    std::string modulus;
    std::int64_t p = 2;
    bool forms = false;
};

Output run_classgroup(const ClassGroupArgs& a) {
    const BaseField base = BaseField::quadratic(a.D);
    const QuadraticFieldData& field = base.field();
    Output out;
    out.doc = {{"discriminant", field.D}, {"h", field.h()}, {"class_group", field.structure.invariants()}};
    if (a.forms) {
        json forms = json::array();
        for (const auto& f : field.forms) forms.push_back(f.to_string());
        out.doc["forms"] = forms;
    }
    if (!a.modulus.empty())
        out.doc["ray_class"] = ray_class_json(base, ray_class_group(base, modulus_of(parse_indexed_set(a.modulus)), a.p));
    return out;
}

struct RayClassArgs {
    std::string base = "Q";
    std::string modulus;
    std::int64_t p = 2;
};

Output run_rayclass(const RayClassArgs& a) {
    const BaseField base = BaseField::parse(a.base);
    const RayClassResult r = ray_class_group(base, modulus_of(parse_indexed_set(a.modulus)), a.p);
    Output out;
    out.doc = {{"base", base.name()}, {"p", a.p}};
    const json details = ray_class_json(base, r);
    for (const auto& [k, v] : details.items()) out.doc[k] = v;
    return out;
}

struct DsnuArgs {
    std::string base = "Q";
    std::string set;
    std::int64_t p = 2;
};

Output run_dsnu(const DsnuArgs& a) {
    const BaseField base = BaseField::parse(a.base);
    const IndexedSet S = parse_indexed_set(a.set);
    const GeneratorRankCheck check = d_s_nu_both(base, S, a.p);
    Output out;
    out.doc = {{"base", base.name()},
               {"set", indexed_set_string(base, S)},
               {"p", a.p},
               {"rayclass", check.rayclass},
               {"idelic",
                {{"delta_rank", check.idelic.delta_rank},
                 {"unit_prank", check.idelic.unit_prank},
                 {"tame_deltas", check.idelic.tame_deltas},
                 {"wild_unit_ranks", check.idelic.wild_unit_ranks},
                 {"value", check.idelic.value()}}},
               {"agree", check.agree()}};
    return out;
}

struct RdBoundArgs {
    std::string base = "Q";
    std::string set;
    std::int64_t prime = 0;
    std::string nu;
    std::int64_t p = 0;
    bool exact = false;
};

Output run_rdbound(const RdBoundArgs& a, int digits) {
    const BaseField base = BaseField::parse(a.base);
    IndexedSet S;
    if (!a.set.empty()) {
        if (a.prime != 0) throw input_error("bad_arguments", "give either --set or --prime/--nu, not both");
        S = parse_indexed_set(a.set);
    } else if (a.prime != 0) {
        if (a.nu.empty()) throw input_error("bad_arguments", "--prime needs --nu");
        const auto above = base.primes_above(a.prime);
        if (above.size() != 1)
            throw input_error("bad_arguments", "--prime is ambiguous over this base; use --set with a descriptor");
        S.push_back({above.front(), DepthIndex::parse(a.nu)});
    }
    std::int64_t p = a.p;
    if (p == 0) {
        if (S.empty()) throw input_error("bad_arguments", "--p is required when S is empty");
        p = S.front().prime.q;
    }
    const BoundReport thm42 = rd_bound_thm42(base, S, p, digits);
    const BoundReport perret = rd_bound_perret(base, S, digits);
    Output out;
    out.doc = {{"thm42", thm42.value_string()}, {"perret", perret.value_string()}};
    if (a.exact) {
        out.doc["thm42_exact"] = to_json(thm42);
        out.doc["perret_exact"] = to_json(perret);
    }
    return out;
}

struct TowerArgs {
    std::int64_t p = 3;
    int N = 3;
};

Output run_towergrowth(const TowerArgs& a, int digits) {
    Output out;
    out.doc = json::array();
    Table t{{"n", "filtration", "tau", "rd_exact", "rd_decimal"}, {}};
    for (const auto& row : tower_rd_growth(a.p, a.N, digits)) {
        out.doc.push_back({{"n", row.n},
                           {"filtration", row.filtration.orders()},
                           {"tau", row.tau.to_string()},
                           {"rd", to_json(row.rd)}});
        std::string exact = row.rd.exact().empty() ? "1" : "";
        for (const auto& [q, e] : row.rd.exact()) exact += (exact.empty() ? "" : "*") + std::to_string(q) + "^" + e.to_string();
        t.rows.push_back({std::to_string(row.n), runs(row.filtration.orders()), row.tau.to_string(), exact,
                          row.rd.decimal()});
    }
    out.table = t;
    return out;
}

struct ScanArgs {
    std::int64_t min = 7;
    std::int64_t max = 200;
    unsigned threads = 0;
};

Output run_criterion_scan(const ScanArgs& a) {
    Output out;
    out.doc = json::array();
    Table t{{"ell", "n", "a", "b", "cond4", "cond5", "verdict", "mod16", "agree"}, {}};
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    for (const auto& r : criterion_scan(a.min, a.max, a.threads)) {
        const bool agree = r.verdict == r.mod16;
        out.doc.push_back({{"ell", r.ell},
                           {"n", r.n},
                           {"a", r.a.get_str()},
                           {"b", r.b.get_str()},
                           {"cond4", r.cond4},
                           {"cond5", r.cond5},
                           {"verdict", r.verdict},
                           {"mod16", r.mod16},
                           {"agree", agree}});
        t.rows.push_back({std::to_string(r.ell), std::to_string(r.n), r.a.get_str(), r.b.get_str(), b(r.cond4),
                          b(r.cond5), b(r.verdict), b(r.mod16), b(agree)});
    }
    out.table = t;
    return out;
}

struct BoundsArgs {
    std::string evaluator;
    int unit_prank = 0;
    int delta_K = 0;
    int theta = 0;
    int b_rank = 0;
    int d = 0;
    int r2 = 0;
    int delta_rank = 0;
    std::string wild_degrees;
    std::string local_deltas;
    std::string wild_finite;
    std::string tame_deltas;
    std::string wild_unit_ranks;
};

Output run_bounds(const BoundsArgs& a) {
    std::int64_t value = 0;
    if (a.evaluator == "shafarevich") {
        value = shafarevich_bound(a.unit_prank, a.delta_K, a.theta, parse_small_list(a.wild_degrees, "wild degree"));
    } else if (a.evaluator == "thm55") {
        value = relation_bound_thm55(a.b_rank, a.theta, a.delta_K, parse_small_list(a.local_deltas, "local delta"));
    } else if (a.evaluator == "kereta") {
        std::vector<std::pair<int, int>> wild;
        for (const auto& item : split(a.wild_finite, ',')) {
            const auto parts = split(item, ':');
            if (parts.size() != 2) throw input_error("bad_arguments", "--wild-finite items are degree:delta");
            wild.emplace_back(static_cast<int>(parse_int(parts[0], "degree")),
                              static_cast<int>(parse_int(parts[1], "delta")));
        }
        value = ker_eta_bound(a.unit_prank, a.d, wild, parse_small_list(a.tame_deltas, "tame delta"),
                              parse_small_list(a.wild_unit_ranks, "wild unit rank"));
    } else if (a.evaluator == "euler") {
        value = euler_char_full(a.r2);
    } else if (a.evaluator == "idelic") {
        value = d_s_nu_idelic(a.delta_rank, a.unit_prank, parse_small_list(a.tame_deltas, "tame delta"),
                              parse_small_list(a.wild_unit_ranks, "wild unit rank"));
    } else {
        throw input_error("bad_arguments", "unknown evaluator '" + a.evaluator + "'");
    }
    return {json{{"evaluator", a.evaluator}, {"value", value}}, {}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ramification filtrations, class groups and discriminant bounds"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "json";
    int digits = 12;
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--precision", digits, "Significant digits of decimal renderings")->check(CLI::PositiveNumber);

    HerbrandArgs herbrand;
    auto* c_herbrand = app.add_subcommand("herbrand", "phi/psi of a filtration, jumps, evaluation");
    c_herbrand->add_option("--orders", herbrand.orders, "g_0,g_1,... of the lower filtration")->required();
    c_herbrand->add_option("--eval", herbrand.eval, "Evaluate at this rational (prints the value)");
    c_herbrand->add_flag("--psi", herbrand.psi, "Evaluate psi instead of phi");

    FiltrationArgs filtration;
    auto* c_filtration = app.add_subcommand("filtration", "Filtration of a catalog extension");
    c_filtration->add_option("--name", filtration.name, "Catalog name, e.g. cyclotomic:3:2")->required();
    c_filtration->add_option("--catalog", filtration.catalog, "JSON catalog file");
    c_filtration->add_option("--depth", filtration.depths, "Depths y to test, comma separated");

    LocalRankArgs localrank;
    auto* c_localrank = app.add_subcommand("localrank", "p-rank of U^(1)/U^(nu) for a catalog local field");
    c_localrank->add_option("--tag", localrank.tag, "Qp, UnramifiedQuadratic, RamifiedQuadraticOver2, CyclotomicLocal");
    c_localrank->add_option("--p", localrank.p, "Residue characteristic")->required();
    c_localrank->add_option("--param", localrank.param, "d for quadratic tags, n for CyclotomicLocal");
    c_localrank->add_option("--nu", localrank.nu, "Depths, comma separated (inf allowed)");

    ClassGroupArgs classgroup;
    auto* c_classgroup = app.add_subcommand("classgroup", "Class group of an imaginary quadratic field");
    c_classgroup->add_option("--D", classgroup.D, "Fundamental discriminant")->required();
    c_classgroup->add_option("--modulus", classgroup.modulus, "Also compute a ray class group, e.g. 2.0:4,2.1:4");
    c_classgroup->add_option("--p", classgroup.p, "Prime for the ray class p-part");
    c_classgroup->add_flag("--forms", classgroup.forms, "List the reduced forms");

    RayClassArgs rayclass;
    auto* c_rayclass = app.add_subcommand("rayclass", "Ray class group of a modulus");
    c_rayclass->add_option("--base", rayclass.base, "Q, zeta3, Q(sqrt-7), or a discriminant");
    c_rayclass->add_option("--modulus", rayclass.modulus, "Prime powers, e.g. 2.0:4,2.1:4 or 9 as 3:2")->required();
    c_rayclass->add_option("--p", rayclass.p, "Prime for the p-part")->required();

    DsnuArgs dsnu;
    auto* c_dsnu = app.add_subcommand("dsnu", "Generator rank: ray class side and idelic side");
    c_dsnu->add_option("--base", dsnu.base, "Base field");
    c_dsnu->add_option("--set", dsnu.set, "Indexed set, e.g. 2.0:4,2.1:inf")->required();
    c_dsnu->add_option("--p", dsnu.p, "Prime")->required();

    RdBoundArgs rdbound;
    auto* c_rdbound = app.add_subcommand("rdbound", "Root discriminant bounds");
    c_rdbound->add_option("--base", rdbound.base, "Base field");
    c_rdbound->add_option("--set", rdbound.set, "Indexed set");
    c_rdbound->add_option("--prime", rdbound.prime, "Single rational prime (with --nu)");
    c_rdbound->add_option("--nu", rdbound.nu, "Depth at --prime");
    c_rdbound->add_option("--p", rdbound.p, "Prime of the p-extension (default: residue characteristic of the first prime)");
    c_rdbound->add_flag("--exact", rdbound.exact, "Include the exact factored forms");

    TowerArgs tower;
    auto* c_tower = app.add_subcommand("towergrowth", "tau and rd along the cyclotomic tower");
    c_tower->add_option("--p", tower.p, "2, 3 or 5")->required();
    c_tower->add_option("--N", tower.N, "Number of layers")->required();

    ScanArgs scan;
    auto* c_scan = app.add_subcommand("criterion-scan", "2-adic criterion for primes ell = 7 mod 8");
    c_scan->add_option("--min", scan.min, "Smallest ell");
    c_scan->add_option("--max", scan.max, "Largest ell");
    c_scan->add_option("--threads", scan.threads, "Worker threads (0 = all cores)");

    BoundsArgs bounds;
    auto* c_bounds = app.add_subcommand("bounds", "Relation-rank and Euler characteristic evaluators");
    c_bounds->add_option("--evaluator", bounds.evaluator, "shafarevich, thm55, kereta, euler, idelic")->required();
    c_bounds->add_option("--unit-prank", bounds.unit_prank, "p-rank of the global units");
    c_bounds->add_option("--delta-K", bounds.delta_K, "1 if K contains zeta_p");
    c_bounds->add_option("--theta", bounds.theta, "theta_S");
    c_bounds->add_option("--b-rank", bounds.b_rank, "p-rank of B_{S,nu}");
    c_bounds->add_option("--d", bounds.d, "Generator rank d_{S,nu}");
    c_bounds->add_option("--r2", bounds.r2, "Number of imaginary places");
    c_bounds->add_option("--delta-rank", bounds.delta_rank, "p-rank of Delta_{S,nu}");
    c_bounds->add_option("--wild-degrees", bounds.wild_degrees, "Local degrees at wild primes");
    c_bounds->add_option("--local-deltas", bounds.local_deltas, "delta_P for P in S");
    c_bounds->add_option("--wild-finite", bounds.wild_finite, "degree:delta(P,nu) for wild primes of finite depth");
    c_bounds->add_option("--tame-deltas", bounds.tame_deltas, "delta_P at tame primes");
    c_bounds->add_option("--wild-unit-ranks", bounds.wild_unit_ranks, "p-rank of U^(1)/U^(nu) at wild primes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        fail("bad_arguments", e.what());
        return 1;
    }

    try {
        Output out;
        if (*c_herbrand) out = run_herbrand(herbrand);
        else if (*c_filtration) out = run_filtration(filtration);
        else if (*c_localrank) out = run_localrank(localrank);
        else if (*c_classgroup) out = run_classgroup(classgroup);
        else if (*c_rayclass) out = run_rayclass(rayclass);
        else if (*c_dsnu) out = run_dsnu(dsnu);
        else if (*c_rdbound) out = run_rdbound(rdbound, digits);
        else if (*c_tower) out = run_towergrowth(tower, digits);
        else if (*c_scan) out = run_criterion_scan(scan);
        else if (*c_bounds) out = run_bounds(bounds);
        emit(out, format);
    } catch (const input_error& e) {
        fail(e.code(), e.what());
        return 1;
    } catch (const internal_error& e) {
        fail("internal", e.what());
        return 2;
    } catch (const std::overflow_error& e) {
        fail("overflow", e.what());
        return 2;
    } catch (const std::exception& e) {
        fail("internal", e.what());
        return 2;
    }
    return 0;
}
