// gric: exact computations in group rings with involution.
//
// One subcommand per capability: fox derivatives and chain complexes of
// finite presentations, relator normalization, dual complexes and chain
// map verification, normal forms in the quadratic-functor coinvariants,
// hermitean evaluation/preimage, and truncated torsion certificates for
// the BS(1,m) dualizing module.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gric/corpus.hpp"
#include "gric/io.hpp"

using namespace gric;

namespace {

struct Output {
  std::string out_path;
  bool quiet = false;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::input, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Presentation load_presentation(const std::string& path) {
  return parse_presentation(slurp(path));
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::formal_mode:
    case ErrorKind::not_aspherical:
    case ErrorKind::not_normalized:
    case ErrorKind::not_hermitian:
    case ErrorKind::unsupported:
      return 3;  // computation refusals
    default:
      return 2;  // bad input / usage
  }
}

Json presentation_json(const Presentation& p) {
  Json out;
  out["name"] = p.name();
  Json gens = Json::array();
  for (const std::string& g : p.gens()) gens.push_back(g);
  out["gens"] = std::move(gens);
  out["deficiency"] = p.deficiency();
  out["aspherical"] = p.aspherical();
  out["text"] = render_presentation(p);
  return out;
}

Json residual_json(const TensorElement& t, const Presentation& p) {
  Json out = Json::array();
  for (const std::string& line : tensor_text(t, p)) out.push_back(line);
  return out;
}

// subcommand bodies: return (results, ok)

std::pair<Json, bool> run_fox(const std::string& file) {
  Presentation p = load_presentation(file);
  FoxComplex c = fox_lyndon_complex(p);
  Json res;
  res["presentation"] = presentation_json(p);
  res["d1"] = matrix_json(c.d1);
  res["d2"] = matrix_json(c.d2);
  res["verified_class"] = c.verified;
  return {res, true};
}

std::pair<Json, bool> run_normalize(const std::string& file) {
  Presentation p = load_presentation(file);
  Presentation n = normalize_presentation(p);
  Json res;
  res["input"] = presentation_json(p);
  res["normalized"] = presentation_json(n);
  Json forced = Json::object();
  for (int i = 0; i < n.gen_count(); ++i)
    forced[n.gens()[i]] = n.gen_images()[i].text();
  res["forced_images"] = std::move(forced);
  res["deficiency_preserved"] = (n.deficiency() == p.deficiency());
  return {res, n.deficiency() == p.deficiency() && n.is_normalized()};
}

std::pair<Json, bool> run_complex(const std::string& file) {
  Presentation p = load_presentation(file);
  FoxComplex c = fox_lyndon_complex(p);
  Json res;
  res["presentation"] = presentation_json(p);
  res["d1"] = matrix_json(c.d1);
  res["d2"] = matrix_json(c.d2);
  if (c.verified) {
    BoundaryReport rep = verify_boundary_squared(c);
    res["composite"] = matrix_json(rep.composite);
    res["boundary_squared_zero"] = rep.zero;
    return {res, rep.zero};
  }
  res["boundary_squared_zero"] = nullptr;
  res["note"] = "formal class: matrices built but unverified";
  return {res, true};
}

std::pair<Json, bool> run_dualize(const std::string& file) {
  Presentation p = load_presentation(file);
  FoxComplex c = fox_lyndon_complex(p);
  RingMatrix dual = dualizing_presentation(c);
  Json res;
  res["presentation"] = presentation_json(p);
  res["dual_presentation_matrix"] = matrix_json(dual);
  res["rows_indexed_by"] = "relators";
  res["cols_indexed_by"] = "generators";
  return {res, true};
}

std::pair<Json, bool> run_verify_cup(const std::string& file) {
  Presentation p = load_presentation(file);
  Presentation n = normalize_presentation(p);
  TensorSpace space(n);
  DualComplex d = dual_complex(n);
  JMaps j = build_j(space);
  ChainMapReport rep = verify_chain_map(space, j);

  Json res;
  res["presentation"] = p.name();
  res["normalized"] = presentation_json(n);
  res["dual_composite_zero"] = dual_composite_is_zero(d);
  Json deg1 = Json::array();
  for (int x = 0; x < n.gen_count(); ++x)
    if (!rep.degree1_residuals[x].is_zero())
      for (const auto& line : tensor_text(rep.degree1_residuals[x], n))
        deg1.push_back(n.gens()[x] + ": " + line);
  res["degree1_residual"] = std::move(deg1);
  res["degree2_residual"] = residual_json(rep.degree2_residual, n);
  res["per_relator_zero"] = rep.per_relator_zero;
  res["ok"] = rep.ok() && dual_composite_is_zero(d);
  return {res, rep.ok() && dual_composite_is_zero(d)};
}

std::pair<Json, bool> run_gamma_nf(const std::string& file) {
  Json in = Json::parse(slurp(file));
  auto [cls, w] = parse_class_spec(in);
  GammaElement x = gamma_from_json(in, cls, w);
  GammaNormalForm nf = gamma_normal_form(x);
  Json res;
  res["normal_form"] = gamma_json(nf.canonical);
  Json eta = Json::array();
  for (int b : nf.eta) eta.push_back(b);
  res["eta"] = std::move(eta);
  Json odot = Json::array();
  for (const auto& [key, val] : nf.odot) {
    Json t;
    t["i"] = key.first + 1;
    t["j"] = key.second + 1;
    t["coefficient"] = val.text();
    odot.push_back(std::move(t));
  }
  res["odot"] = std::move(odot);
  res["is_zero"] = nf.is_zero();
  res["mod2"] = mod2_json(reduce_mod2(x));
  return {res, true};
}

std::pair<Json, bool> run_bm_eval(const std::string& file) {
  Json in = Json::parse(slurp(file));
  auto [cls, w] = parse_class_spec(in);
  GammaElement x = gamma_from_json(in, cls, w);
  HermitianForm h = bm_evaluate(x);
  Json res;
  res["hermitian"] = hermitian_json(h);
  res["even"] = is_even(h);
  return {res, true};
}

std::pair<Json, bool> run_bm_preimage(const std::string& file) {
  Json in = Json::parse(slurp(file));
  auto [cls, w] = parse_class_spec(in);
  HermitianForm h = hermitian_from_json(in, cls, w);
  GammaElement x = bm_preimage(h);
  bool roundtrip = bm_evaluate(x) == h;
  Json res;
  res["gamma"] = gamma_json(x);
  res["roundtrip_exact"] = roundtrip;
  return {res, roundtrip};
}

std::pair<Json, bool> run_bs_torsion(long long m, int depth) {
  TorsionReport rep = torsion_report(m, depth);
  return {torsion_json(rep), rep.transforms_verified};
}

std::pair<Json, bool> run_selftest() {
  Json items = Json::array();
  bool ok = true;
  for (const Presentation& p : corpus::all()) {
    Json item;
    item["name"] = p.name();
    FoxComplex c = fox_lyndon_complex(p);
    bool boundary = verify_boundary_squared(c).zero;
    Presentation n = normalize_presentation(p);
    bool norm_ok = n.is_normalized() && n.deficiency() == p.deficiency();
    TensorSpace space(n);
    JMaps j = build_j(space);
    ChainMapReport rep = verify_chain_map(space, j);
    bool cup_ok = rep.ok() && rep.per_relator_zero &&
                  dual_composite_is_zero(dual_complex(n));
    item["boundary_squared_zero"] = boundary;
    item["normalization_ok"] = norm_ok;
    item["cup_identities_ok"] = cup_ok;
    items.push_back(std::move(item));
    ok = ok && boundary && norm_ok && cup_ok;
  }
  Json bs = Json::array();
  for (auto [m, depth] : {std::pair<long long, int>{2, 1}, {2, 2}, {3, 1}}) {
    TorsionReport rep = torsion_report(m, depth);
    Json t = torsion_json(rep);
    bs.push_back(std::move(t));
    // the transform certificate must hold; torsion-freeness itself is a
    // property of (m, depth), reported but only asserted for even m
    ok = ok && rep.transforms_verified && (m % 2 != 0 || rep.torsion_free);
  }
  Json res;
  res["corpus"] = std::move(items);
  res["bs_torsion"] = std::move(bs);
  return {res, ok};
}

int emit(const Json& report, const Output& out, int code) {
  std::string text = report.dump(2);
  if (!out.out_path.empty()) {
    std::ofstream f(out.out_path);
    f << text << "\n";
  }
  if (!out.quiet) std::cout << text << "\n";
  return code;
}

int run_reported(const std::string& command, const std::string& input_blob,
                 const Output& out,
                 const std::function<std::pair<Json, bool>()>& body) {
  Json report;
  report["schema"] = 1;
  report["command"] = command;
  report["input"] = content_digest(input_blob);
  auto t0 = std::chrono::steady_clock::now();
  try {
    auto [results, ok] = body();
    report["ok"] = ok;
    report["results"] = std::move(results);
    report["timing_ms"] =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();
    return emit(report, out, ok ? 0 : 1);
  } catch (const Error& e) {
    report["ok"] = false;
    Json err;
    err["type"] = error_kind_name(e.kind());
    err["message"] = e.what();
    report["results"] = Json{{"error", std::move(err)}};
    report["timing_ms"] =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();
    return emit(report, out, exit_code_for(e.kind()));
  } catch (const Json::exception& e) {
    report["ok"] = false;
    report["results"] = Json{{"error", Json{{"type", "input"},
                                            {"message", e.what()}}}};
    return emit(report, out, 2);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact group-ring calculus toolkit"};
  app.require_subcommand(1);

  Output out;
  app.add_option("--out", out.out_path, "write the JSON report to a file");
  app.add_flag("--quiet", out.quiet, "do not print the report to stdout");

  std::string file;
  long long m = 2;
  int depth = 1;

  auto* cmd_fox = app.add_subcommand("fox", "fox matrices of a presentation");
  cmd_fox->add_option("file", file, "presentation file")->required();
  auto* cmd_norm =
      app.add_subcommand("normalize", "rewrite relators as products of "
                                      "distinct positive generators");
  cmd_norm->add_option("file", file)->required();
  auto* cmd_complex =
      app.add_subcommand("complex", "chain complex and boundary check");
  cmd_complex->add_option("file", file)->required();
  auto* cmd_dualize =
      app.add_subcommand("dualize", "presentation matrix of the dual module");
  cmd_dualize->add_option("file", file)->required();
  auto* cmd_cup =
      app.add_subcommand("verify-cup", "verify the chain map identities");
  cmd_cup->add_option("file", file)->required();
  auto* cmd_gnf =
      app.add_subcommand("gamma-nf", "normal form of a gamma element (JSON)");
  cmd_gnf->add_option("file", file)->required();
  auto* cmd_eval =
      app.add_subcommand("bm-eval", "hermitean evaluation of a gamma element");
  cmd_eval->add_option("file", file)->required();
  auto* cmd_pre =
      app.add_subcommand("bm-preimage", "gamma preimage of a hermitean form");
  cmd_pre->add_option("file", file)->required();
  auto* cmd_bs =
      app.add_subcommand("bs-torsion", "truncated torsion certificate");
  cmd_bs->add_option("--m", m, "multiplier (>= 2)")->required();
  cmd_bs->add_option("--depth", depth, "truncation depth (>= 1)")->required();
  auto* cmd_self = app.add_subcommand("selftest", "run the built-in corpus");
  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const auto with_file = [&](const char* name,
                             std::pair<Json, bool> (*fn)(const std::string&)) {
    std::string blob;
    try {
      blob = slurp(file);
    } catch (const Error&) {
      blob = file;
    }
    return run_reported(name, blob, out, [&] { return fn(file); });
  };

  if (cmd_fox->parsed()) return with_file("fox", run_fox);
  if (cmd_norm->parsed()) return with_file("normalize", run_normalize);
  if (cmd_complex->parsed()) return with_file("complex", run_complex);
  if (cmd_dualize->parsed()) return with_file("dualize", run_dualize);
  if (cmd_cup->parsed()) return with_file("verify-cup", run_verify_cup);
  if (cmd_gnf->parsed()) return with_file("gamma-nf", run_gamma_nf);
  if (cmd_eval->parsed()) return with_file("bm-eval", run_bm_eval);
  if (cmd_pre->parsed()) return with_file("bm-preimage", run_bm_preimage);
  if (cmd_bs->parsed())
    return run_reported("bs-torsion",
                        "m=" + std::to_string(m) + " depth=" + std::to_string(depth),
                        out, [&] { return run_bs_torsion(m, depth); });
  if (cmd_self->parsed())
    return run_reported("selftest", "corpus", out, [] { return run_selftest(); });
  return 2;
}
