// Command-line front end: model validation, no-arbitrage verdicts with
// machine-checkable certificates, consistent price systems and uniqueness
// bounds, reversible/pure order decomposition, superhedging, and emission
// of the built-in reference markets.
//
// Exit codes: 0 = command ran (verdict content is in the output, not the
// exit code); 2 = input problem (unreadable file, malformed model or
// arguments, failed validation); 3 = internal inconsistency detected by a
// certificate recheck (a bug trap, never expected).

#include "arbkit/decompose.hpp"
#include "arbkit/examples.hpp"
#include "arbkit/pricing.hpp"
#include "arbkit/verdicts.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace arbkit;
using ojson = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

MarketModel load_model(const std::string& path) {
    MarketModel m = parse_model(read_file(path));
    const std::vector<Violation> bad = validate_model(m);
    if (!bad.empty()) {
        std::cerr << validation_report_json(bad);
        throw std::invalid_argument("model in " + path + " fails validation");
    }
    return m;
}

int node_index(const MarketModel& m, const std::string& id) {
    const auto it = m.index_of.find(id);
    if (it == m.index_of.end())
        throw std::invalid_argument("no node with id \"" + id + "\"");
    return it->second;
}

ojson rat_json(const Rat& r) {
    if (denominator(r) == 1 && numerator(r) >= LLONG_MIN &&
        numerator(r) <= LLONG_MAX)
        return ojson(numerator(r).convert_to<long long>());
    return ojson(format_rational(r));
}

std::string holds_word(const Verdict& v) {
    if (!v.applicable) return "not applicable";
    return v.holds ? "holds" : "fails";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact no-arbitrage analysis of bid-ask market models on "
                 "finite event trees"};
    app.require_subcommand(1);

    std::string model_path, out_path, witness_path, conditions_csv;
    std::string bounds_spec, claim_path, example_name, prob_mode = "uniform";
    std::string node_id;
    std::vector<std::string> order_args;
    bool json_out = false, text_out = false, strict = false, timing = false;
    int n_max = 3;
    int numeraire = 1;

    CLI::App* validate = app.add_subcommand(
        "validate", "Parse a model file and print its validation report");
    validate->add_option("model", model_path, "model JSON file")->required();

    CLI::App* check = app.add_subcommand(
        "check", "Decide the no-arbitrage conditions with certificates");
    check->add_option("model", model_path, "model JSON file")->required();
    check->add_option("--conditions", conditions_csv,
                      "comma-separated subset: "
                      "na,nas,naps,nar,nawps,ef,penner,nullspace,mixed");
    check->add_option("--witness", witness_path,
                      "dominated bid-ask model for the mixed condition");
    check->add_flag("--json", json_out, "JSON report (default)");
    check->add_flag("--text", text_out, "one line per condition");
    check->add_flag("--timing", timing,
                    "include per-condition wall time (breaks byte "
                    "determinism)");

    CLI::App* cps = app.add_subcommand(
        "cps", "Find a consistent price system or certify none exists");
    cps->add_option("model", model_path, "model JSON file")->required();
    cps->add_flag("--strict", strict,
                  "demand prices in the relative interior of the dual cones");
    cps->add_option("--bounds", bounds_spec,
                    "NODE:ASSET (1-based asset): price interval of that "
                    "coordinate over all normalized consistent systems");

    CLI::App* dec = app.add_subcommand(
        "decompose", "Split an order into reversible and pure parts");
    dec->add_option("model", model_path, "model JSON file")->required();
    dec->add_option("--node", node_id, "node id")->required();
    dec->add_option("--order", order_args,
                    "triples I J QTY (1-based assets, rational quantity)");

    CLI::App* sup = app.add_subcommand(
        "superhedge", "Least numeraire endowment superhedging a claim");
    sup->add_option("model", model_path, "model JSON file")->required();
    sup->add_option("--claim", claim_path, "claim JSON file")->required();
    sup->add_option("--numeraire", numeraire, "1-based asset (default 1)");

    CLI::App* ex = app.add_subcommand(
        "examples", "Write one of the built-in reference markets");
    ex->add_option("name", example_name, "ex41 | ex42 | ex43")->required();
    ex->add_option("--n-max", n_max, "truncation depth for ex43 (default 3)");
    ex->add_option("--prob", prob_mode, "uniform | geometric")
        ->check(CLI::IsMember({"uniform", "geometric"}));
    ex->add_option("--out", out_path, "output file (default <name>.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (validate->parsed()) {
            const MarketModel m = parse_model(read_file(model_path));
            const std::vector<Violation> bad = validate_model(m);
            std::cout << validation_report_json(bad);
            return bad.empty() ? 0 : 2;
        }

        if (check->parsed()) {
            const MarketModel m = load_model(model_path);
            RunOptions opts;
            opts.timing = timing;
            MarketModel wm;
            if (!witness_path.empty()) {
                wm = load_model(witness_path);
                opts.mixed_witness = &wm;
            }
            if (!conditions_csv.empty()) {
                std::stringstream ss(conditions_csv);
                std::string tok;
                while (std::getline(ss, tok, ',')) {
                    static const std::vector<std::string> known = {
                        "na",    "nas", "naps",   "nar",       "nawps",
                        "ef",    "penner", "nullspace", "mixed"};
                    if (std::find(known.begin(), known.end(), tok) ==
                        known.end())
                        throw std::invalid_argument("unknown condition \"" +
                                                    tok + "\"");
                    if (tok == "mixed" && !opts.mixed_witness)
                        throw std::invalid_argument(
                            "the mixed condition needs --witness");
                    opts.conditions.push_back(tok);
                }
            }
            const Report rep = run_all(m, opts);
            if (text_out) {
                for (const Verdict& v : rep.verdicts)
                    std::cout << v.condition << ": " << holds_word(v) << "\n";
                for (const std::string& line : rep.consistency)
                    std::cout << "consistency: " << line << "\n";
            } else {
                std::cout << report_to_json(m, rep);
            }
            return 0;
        }

        if (cps->parsed()) {
            const MarketModel m = load_model(model_path);
            if (!bounds_spec.empty()) {
                const auto colon = bounds_spec.rfind(':');
                if (colon == std::string::npos)
                    throw std::invalid_argument("--bounds wants NODE:ASSET");
                const int u = node_index(m, bounds_spec.substr(0, colon));
                const long asset = std::stol(bounds_spec.substr(colon + 1));
                if (asset < 1 || static_cast<size_t>(asset) > m.d)
                    throw std::invalid_argument("asset index out of range");
                const PriceBounds b = cps_uniqueness_bounds(
                    m, u, static_cast<size_t>(asset - 1));
                ojson o;
                o["node"] = bounds_spec.substr(0, colon);
                o["asset"] = asset;
                o["feasible"] = b.feasible;
                if (b.feasible) {
                    o["lo"] = b.lo_unbounded ? ojson(nullptr) : rat_json(b.lo);
                    o["hi"] = b.hi_unbounded ? ojson(nullptr) : rat_json(b.hi);
                }
                std::cout << o.dump(2) << "\n";
                return 0;
            }
            const CpsSearch r = find_cps(m, strict);
            ojson o;
            o["found"] = r.found;
            o["strict"] = r.strict;
            if (r.strict) o["margin"] = rat_json(r.eps);
            if (r.found || !r.prices.z.empty())
                o["prices"] = ojson::parse(price_system_to_json(m, r.prices));
            if (!r.found && !r.certificate.empty()) {
                ojson f = ojson::array();
                for (const Rat& q : r.certificate) f.push_back(rat_json(q));
                o[r.infeasible_lp ? "farkas" : "boundary_certificate"] =
                    std::move(f);
            }
            std::cout << o.dump(2) << "\n";
            return 0;
        }

        if (dec->parsed()) {
            const MarketModel m = load_model(model_path);
            const int u = node_index(m, node_id);
            if (order_args.size() % 3 != 0)
                throw std::invalid_argument(
                    "--order wants groups of three: I J QTY");
            OrderMatrix lambda(m.d, QVec(m.d, Rat(0)));
            for (size_t k = 0; k < order_args.size(); k += 3) {
                const long i = std::stol(order_args[k]);
                const long j = std::stol(order_args[k + 1]);
                if (i < 1 || j < 1 || static_cast<size_t>(i) > m.d ||
                    static_cast<size_t>(j) > m.d || i == j)
                    throw std::invalid_argument("bad order pair indices");
                const auto qty = parse_rational(order_args[k + 2]);
                if (!qty)
                    throw std::invalid_argument("bad order quantity \"" +
                                                order_args[k + 2] + "\"");
                lambda[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] +=
                    *qty;
            }
            const Decomposition d = decompose_order(m, u, lambda);
            std::cout << decomposition_to_json(m, d);
            return 0;
        }

        if (sup->parsed()) {
            const MarketModel m = load_model(model_path);
            const Claim v = claim_from_json(m, read_file(claim_path));
            if (numeraire < 1 || static_cast<size_t>(numeraire) > m.d)
                throw std::invalid_argument("numeraire out of range");
            const SuperhedgeResult r =
                superhedge(m, v, static_cast<size_t>(numeraire - 1));
            std::cout << superhedge_to_json(m, r);
            return 0;
        }

        if (ex->parsed()) {
            MarketModel m = build_example(example_name, n_max);
            if (prob_mode == "geometric") set_geometric_probs(m);
            if (out_path.empty()) out_path = example_name + ".json";
            std::ofstream out(out_path, std::ios::binary);
            if (!out)
                throw std::invalid_argument("cannot write " + out_path);
            out << serialize_model(m);
            std::cout << "wrote " << out_path << "\n";
            return 0;
        }
    } catch (const ModelError& e) {
        std::cerr << "input error [" << e.rule << "]: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
