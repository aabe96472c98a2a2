// Command-line front end: spec-file ingestion, validation, and the
// nielsen / reidemeister / fixed-points / certification / oracle commands.
// Exit codes: 0 success, 1 input or validation error, 2 hypothesis refuted.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "nfp/report.hpp"
#include "nfp/specfile.hpp"

namespace {

nfp::ParamMap parse_params(const std::vector<std::string>& raw) {
  nfp::ParamMap out;
  for (const auto& chunk : raw) {
    std::size_t start = 0;
    while (start < chunk.size()) {
      std::size_t comma = chunk.find(',', start);
      std::string item = chunk.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      std::size_t eq = item.find('=');
      if (eq == std::string::npos) throw nfp::SpecError("--param expects name=value, got '" + item + "'");
      out[item.substr(0, eq)] = nfp::parse_rat(item.substr(eq + 1));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

struct CommonArgs {
  std::string file;
  std::vector<std::string> params;
  bool json = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("file", args.file, "spec file (nielsen-spec/1 JSON)")->required();
  cmd->add_option("--param", args.params, "parameter substitution, e.g. --param k=2 or --param a=-1,c=-1");
  cmd->add_flag("--json", args.json, "emit the machine-readable report");
}

int emit(const nfp::Report& rep, bool json) {
  if (json)
    std::cout << rep.body.dump(2) << "\n";
  else
    std::cout << rep.text();
  return rep.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Nielsen/Reidemeister numbers of self-maps of infra-solvmanifolds given by canonical-type polynomial actions"};
  app.require_subcommand(1);

  CommonArgs args;
  nfp::RunOptions opt;

  auto* c_validate = app.add_subcommand("validate", "parse and validate a spec file");
  add_common(c_validate, args);

  auto* c_nielsen = app.add_subcommand("nielsen", "Nielsen number via the averaging formula");
  add_common(c_nielsen, args);
  c_nielsen->add_option("--route", opt.route, "invariant | net | jacobian")->default_val("invariant");
  c_nielsen->add_option("--samples", opt.samples, "sample points for the jacobian route")->default_val(10);

  auto* c_reid = app.add_subcommand("reidemeister", "Reidemeister number via the filtered recursion");
  add_common(c_reid, args);

  auto* c_fix = app.add_subcommand("fixed-points", "fixed points of the induced map on the quotient");
  add_common(c_fix, args);

  auto* c_cnr = app.add_subcommand("certify-nr", "certify the NR property of the declared subgroup");
  add_common(c_cnr, args);
  c_cnr->add_option("--word-bound", opt.word_bound, "word length bound for rank >= 2 actions");

  auto* c_cnet = app.add_subcommand("certify-net", "certify netness of the declared subgroup");
  add_common(c_cnet, args);
  c_cnet->add_option("--exponent-bound", opt.exponent_bound, "Kronecker exponent bound");

  auto* c_lin = app.add_subcommand("linearise", "per-level linearisation blocks of the lift and its coset twists");
  add_common(c_lin, args);

  auto* c_oracle = app.add_subcommand("oracle", "brute-force cross-checks of the class counts");
  add_common(c_oracle, args);
  c_oracle->add_option("--box-radius", opt.box_radius, "wraparound box radius for the union-find oracle");

  CLI11_PARSE(app, argc, argv);

  const std::map<std::string, std::string> names = {
      {"validate", "validate"},       {"nielsen", "nielsen"},   {"reidemeister", "reidemeister"},
      {"fixed-points", "fixed-points"}, {"certify-nr", "certify-nr"}, {"certify-net", "certify-net"},
      {"linearise", "linearise"},     {"oracle", "oracle"}};

  std::string command;
  for (const auto& [cli_name, cmd_name] : names)
    if (app.get_subcommand(cli_name)->parsed()) command = cmd_name;

  try {
    nfp::SpecFile spec = nfp::load_spec_file(args.file, parse_params(args.params));
    nfp::Report rep = nfp::run_command(command, spec, opt);
    return emit(rep, args.json);
  } catch (const nfp::SpecError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
