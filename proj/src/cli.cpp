#include "hcz/cli.hpp"

#include "hcz/cyclic.hpp"
#include "hcz/dga.hpp"
#include "hcz/error.hpp"
#include "hcz/filtered.hpp"
#include "hcz/hochschild.hpp"
#include "hcz/ktheory.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>
#include <thread>

namespace hcz::cli {

namespace {

using ojson = nlohmann::ordered_json;

struct ArgumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RangeProblem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Result {
  std::string label;
  int degree = 0;
  AbelianGroup group;
  std::vector<std::string> flags;
  std::vector<std::string> provenance;
  ojson extra = ojson::object();
};

struct Report {
  std::string command;
  ojson params = ojson::object();
  std::vector<Result> results;
  bool failed = false;
};

Integer power(long p, long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  return r;
}

struct PrimePower {
  long p = 0;
  int n = 0;
};

// zmod:p^n or adic:p^n; a bare p means n = 1.
std::optional<PrimePower> builtin_ring(const std::string& ring, const std::string& scheme) {
  static const std::regex re(R"(^([a-z]+):(\d+)(?:\^(\d+))?$)");
  std::smatch m;
  if (!std::regex_match(ring, m, re)) return std::nullopt;
  if (m[1] != scheme) return std::nullopt;
  PrimePower r;
  try {
    r.p = std::stol(m[2]);
    r.n = m[3].matched ? std::stoi(m[3]) : 1;
  } catch (const std::exception&) {
    throw ArgumentError("ring descriptor out of range: " + ring);
  }
  if (!is_prime(r.p)) throw ArgumentError(std::to_string(r.p) + " is not prime");
  if (r.n < 1) throw ArgumentError("exponent must be >= 1");
  return r;
}

bool looks_builtin(const std::string& ring) {
  return ring.rfind("zmod:", 0) == 0 || ring.rfind("adic:", 0) == 0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read ring file " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string zmod_name(const PrimePower& r) { return "Z/" + power(r.p, r.n).get_str(); }

// Resolved degree range plus the last degree inside the verified window.
struct DegreeRange {
  int max = 0;
  std::optional<int> verified;
};

DegreeRange degree_range(const JobSpec& spec, const std::optional<PrimePower>& r) {
  DegreeRange d;
  if (r) {
    d.verified = 2 * static_cast<int>(r->p) - 1;
    d.max = spec.max_degree.value_or(*d.verified);
  } else {
    d.max = spec.max_degree.value_or(4);
  }
  if (d.max < 0) throw ArgumentError("max degree must be >= 0");
  if (d.verified && d.max > *d.verified && !spec.allow_unverified)
    throw RangeProblem("max degree " + std::to_string(d.max) + " lies beyond the verified window 0.." +
                       std::to_string(*d.verified) + "; pass --allow-unverified to compute it anyway");
  return d;
}

void flag_unverified(Result& r, const DegreeRange& d, int last_verified) {
  if (d.verified && r.degree > last_verified) r.flags.push_back("UNVERIFIED");
}

DGAlgebra load_algebra(const JobSpec& spec, std::optional<PrimePower>& builtin, std::string& name) {
  builtin = builtin_ring(spec.ring, "zmod");
  if (builtin) {
    name = "koszul resolution of " + zmod_name(*builtin);
    return koszul_resolution(power(builtin->p, builtin->n));
  }
  if (looks_builtin(spec.ring)) throw ArgumentError("bad ring descriptor " + spec.ring);
  name = "dga file " + spec.ring;
  return dga_from_json(read_file(spec.ring));
}

Report homology_job(const JobSpec& spec) {
  Report rep;
  rep.command = spec.command;
  std::optional<PrimePower> builtin;
  std::string name;
  DGAlgebra a = load_algebra(spec, builtin, name);
  DegreeRange d = degree_range(spec, builtin);
  rep.params["ring"] = spec.ring;
  rep.params["max_degree"] = d.max;
  rep.params["allow_unverified"] = spec.allow_unverified;

  if (spec.command == "hh") {
    HochschildComplex h(a, d.max);
    for (int i = 0; i <= d.max; ++i) {
      Result r{"HH_" + std::to_string(i), i, homology(h.complex(), i), {}, {name, "normalized Hochschild complex"}};
      flag_unverified(r, d, d.verified.value_or(0));
      rep.results.push_back(std::move(r));
    }
  } else if (spec.command == "hc") {
    CyclicComplexBundle b = cyclic_bundle(a, d.max);
    for (int i = 0; i <= d.max; ++i) {
      Result r{"HC_" + std::to_string(i), i, homology(b.total, i), {}, {name, "total complex of the (b, B) bicomplex"}};
      flag_unverified(r, d, d.verified.value_or(0));
      rep.results.push_back(std::move(r));
    }
  } else {
    if (!builtin) throw ArgumentError("rel-hc needs a builtin ring zmod:p^n");
    if (builtin->n < 2) throw ArgumentError("rel-hc needs n >= 2");
    const DGAMorphism f = reduction_map(power(builtin->p, builtin->n), power(builtin->p, builtin->n - 1));
    CyclicComplexBundle src = cyclic_bundle(f.source, d.max + 1);
    CyclicComplexBundle tgt = cyclic_bundle(f.target, d.max + 1);
    ChainMap map = induced_total_map(f, src, tgt);
    const std::string ideal = power(builtin->p, builtin->n - 1).get_str() + zmod_name(*builtin);
    for (int i = 0; i <= d.max; ++i) {
      Result r{"HC_" + std::to_string(i) + "(" + zmod_name(*builtin) + ", " + ideal + ")", i,
               relative_homology(map, i),
               {},
               {name, "fibre of " + zmod_name(*builtin) + " -> Z/" + power(builtin->p, builtin->n - 1).get_str()}};
      // the relative group in degree i sees HC_{i+1} of the tower, whose
      // surjectivity is only known through 2p-1
      flag_unverified(r, d, d.verified.value_or(0) - 1);
      rep.results.push_back(std::move(r));
    }
  }
  return rep;
}

Report gr_check_job(const JobSpec& spec) {
  Report rep;
  rep.command = spec.command;
  FilteredRing m;
  std::optional<PrimePower> r = builtin_ring(spec.ring, "adic");
  if (!r) r = builtin_ring(spec.ring, "zmod");
  if (r) {
    m = adic_filtration(r->p, r->n);
  } else {
    if (looks_builtin(spec.ring)) throw ArgumentError("bad ring descriptor " + spec.ring);
    m = filtered_ring_from_json(read_file(spec.ring));
  }
  if (spec.max_q < 0) throw ArgumentError("max q must be >= 0");
  rep.params["ring"] = spec.ring;
  rep.params["max_q"] = spec.max_q;
  for (int q = 0; q <= spec.max_q; ++q)
    for (int k = -(q + 1) * m.window() - 1; k <= 1; ++k) {
      ComparisonReport c = graded_comparison(m, q, k);
      Result res{"q=" + std::to_string(q) + " k=" + std::to_string(k), q, c.lhs, {}, {"Z_q(M)(k)/Z_q(M)(k-1)"}};
      res.extra["level"] = k;
      res.extra["graded_side"] = c.rhs.to_string();
      if (!c.groups_equal) res.flags.push_back("GROUPS_DIFFER");
      if (!c.map_is_isomorphism) res.flags.push_back("NOT_ISOMORPHIC");
      if (!c.rotation_compatible) res.flags.push_back("ROTATION");
      if (c.ok()) res.flags.push_back("OK");
      rep.failed = rep.failed || !c.ok();
      rep.results.push_back(std::move(res));
    }
  return rep;
}

Report k_groups_job(const JobSpec& spec) {
  Report rep;
  rep.command = spec.command;
  if (!is_prime(spec.p)) throw ArgumentError("--p must be prime");
  if (spec.n < 1) throw ArgumentError("--n must be >= 1");
  rep.params["p"] = spec.p;
  rep.params["n"] = spec.n;
  KTable t = k_table(spec.p, spec.n);
  for (const KEntry& e : t.entries) {
    Result r{"K_" + std::to_string(e.degree) + "(Z/" + power(spec.p, spec.n).get_str() + ")", e.degree, e.group,
             e.flags, e.provenance};
    rep.failed = rep.failed || !e.consistent;
    rep.results.push_back(std::move(r));
  }
  return rep;
}

// One (p, n) cell of the reproduction run.
std::vector<Result> reproduce_cell(long p, int n) {
  std::vector<Result> out;
  const int top = 2 * static_cast<int>(p) - 1;
  auto row = [&](const std::string& table, int i, const AbelianGroup& got, const AbelianGroup& expected) {
    Result r;
    r.label = table + " p=" + std::to_string(p) + " n=" + std::to_string(n) + " i=" + std::to_string(i);
    r.degree = i;
    r.group = got;
    r.flags.push_back(got == expected ? "PASS" : "FAIL");
    r.extra["table"] = table;
    r.extra["p"] = p;
    r.extra["n"] = n;
    r.extra["expected"] = expected.to_string();
    out.push_back(std::move(r));
  };
  const DGAlgebra a = koszul_resolution(power(p, n));
  {
    HochschildComplex h(a, top);
    for (int i = 0; i <= top; ++i)
      row("HH", i, homology(h.complex(), i), i % 2 ? AbelianGroup::trivial() : AbelianGroup::cyclic(power(p, n)));
  }
  {
    CyclicComplexBundle b = cyclic_bundle(a, top);
    for (int i = 0; i <= top; ++i)
      row("HC", i, homology(b.total, i),
          i % 2 ? AbelianGroup::trivial() : AbelianGroup::cyclic(power(p, static_cast<long>(n) * (i / 2 + 1))));
    for (int i = 0; i <= top; ++i) row("HC_mod_p", i, homology_mod(b.total, i, p), AbelianGroup::cyclic(p));
  }
  if (n >= 2) {
    const DGAMorphism f = reduction_map(power(p, n), power(p, n - 1));
    CyclicComplexBundle src = cyclic_bundle(f.source, top + 1);
    CyclicComplexBundle tgt = cyclic_bundle(f.target, top + 1);
    ChainMap map = induced_total_map(f, src, tgt);
    for (int i = 0; i <= top; ++i)
      row("HC_rel", i, relative_homology(map, i),
          i % 2 ? AbelianGroup::trivial() : AbelianGroup::cyclic(power(p, i / 2 + 1)));
    for (int i = 0; i <= top; ++i) {
      HomologyMap h = induced_homology_map(homology_presentation(src.total, i), homology_presentation(tgt.total, i),
                                           map.at(i));
      row("HC_onto", i, h.cokernel_group(), AbelianGroup::trivial());
    }
  }
  if (p >= 5) {
    KTable t = k_table(p, n);
    for (const KEntry& e : t.entries) {
      // reassembled from the relative groups and the K(Z/p) input
      Integer order = *e.prime_to_p.order();
      for (const auto& g : e.relative) order *= *g.order();
      const int j = (e.degree + 1) / 2;
      AbelianGroup expected = e.degree % 2
                                  ? AbelianGroup::cyclic(power(p, static_cast<long>(j) * (n - 1)) * (power(p, j) - 1))
                                  : AbelianGroup::trivial();
      row("K", e.degree, AbelianGroup::cyclic(order), expected);
      out.back().provenance = e.provenance;
    }
  }
  return out;
}

Report reproduce_job(const JobSpec& spec) {
  Report rep;
  rep.command = spec.command;
  for (long p : spec.p_list)
    if (p < 3 || !is_prime(p)) throw ArgumentError("every p must be a prime >= 3, got " + std::to_string(p));
  for (int n : spec.n_list)
    if (n < 1) throw ArgumentError("every n must be >= 1, got " + std::to_string(n));
  rep.params["p"] = spec.p_list;
  rep.params["n"] = spec.n_list;

  std::vector<std::pair<long, int>> cells;
  for (long p : spec.p_list)
    for (int n : spec.n_list) cells.emplace_back(p, n);
  std::vector<std::vector<Result>> done(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c; (c = next++) < cells.size();) {
      try {
        done[c] = reproduce_cell(cells[c].first, cells[c].second);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(cells.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto& cell : done)
    for (auto& r : cell) {
      rep.failed = rep.failed || r.flags.front() == "FAIL";
      rep.results.push_back(std::move(r));
    }
  return rep;
}

ojson factors_json(const AbelianGroup& g) {
  ojson a = ojson::array();
  for (const Integer& d : g.invariant_factors()) a.push_back(d.get_str());
  return a;
}

void write(const Report& rep, Format format, std::ostream& out) {
  if (format == Format::Json) {
    ojson doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = rep.command;
    doc["params"] = rep.params;
    doc["results"] = ojson::array();
    for (const Result& r : rep.results) {
      ojson j;
      j["degree"] = r.degree;
      j["free_rank"] = r.group.free_rank();
      j["invariant_factors"] = factors_json(r.group);
      j["flags"] = r.flags;
      j["provenance"] = r.provenance;
      for (const auto& [k, v] : r.extra.items()) j[k] = v;
      doc["results"].push_back(std::move(j));
    }
    out << doc.dump(2) << '\n';
    return;
  }
  out << rep.command;
  for (const auto& [k, v] : rep.params.items()) out << ' ' << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump());
  out << '\n';
  for (const Result& r : rep.results) {
    out << "  " << r.label << " = " << r.group.to_string();
    if (r.extra.contains("expected") && r.flags.front() == "FAIL")
      out << " (expected " << r.extra["expected"].get<std::string>() << ")";
    if (!r.flags.empty()) {
      out << "  [";
      for (std::size_t i = 0; i < r.flags.size(); ++i) out << (i ? ", " : "") << r.flags[i];
      out << "]";
    }
    out << '\n';
  }
  if (rep.command == "reproduce-paper") {
    std::size_t fails = 0;
    for (const Result& r : rep.results) fails += r.flags.front() == "FAIL";
    out << (fails ? "FAIL" : "PASS") << ": " << rep.results.size() - fails << " of " << rep.results.size()
        << " cells agree\n";
  }
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse:
      return ParseError;
    case ErrorCode::BoundTooSmall:
    case ErrorCode::TruncationTooTight:
    case ErrorCode::OutOfRange:
    case ErrorCode::RangeEmpty:
      return RangeError;
    default:
      return InvalidArguments;
  }
}

template <class T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      long v = std::stol(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<T>(v));
    } catch (const std::exception&) {
      throw ArgumentError("not an integer list: " + text);
    }
  }
  return out;
}

}  // namespace

int run(const JobSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    Report rep;
    if (spec.command == "hh" || spec.command == "hc" || spec.command == "rel-hc")
      rep = homology_job(spec);
    else if (spec.command == "gr-check")
      rep = gr_check_job(spec);
    else if (spec.command == "k-groups")
      rep = k_groups_job(spec);
    else if (spec.command == "reproduce-paper")
      rep = reproduce_job(spec);
    else
      throw ArgumentError("unknown command " + spec.command);
    write(rep, spec.format, out);
    return rep.failed ? Failed : Ok;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return InvalidArguments;
  } catch (const RangeProblem& e) {
    err << "error: " << e.what() << '\n';
    return RangeError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.code());
  }
}

int run_command_line(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hochschild and cyclic homology of small DG rings over Z", "hcz"};
  app.require_subcommand(1);
  app.fallthrough();
  JobSpec spec;
  std::string format = "text";
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  int max_degree = 0;
  std::vector<CLI::Option*> degree_options;
  std::string p_text = "3,5,7", n_text = "1,2,3";
  for (const char* name : {"hh", "hc", "rel-hc"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--ring", spec.ring, "zmod:p^n or a DG algebra file")->required();
    degree_options.push_back(
        sub->add_option("--max-degree", max_degree, "highest degree (default 2p-1 for zmod rings, 4 for files)"));
    sub->add_flag("--allow-unverified", spec.allow_unverified, "allow degrees beyond 2p-1");
  }
  CLI::App* gr = app.add_subcommand("gr-check");
  gr->add_option("--ring", spec.ring, "adic:p^n, zmod:p^n or a filtered ring file")->required();
  gr->add_option("--max-q", spec.max_q, "highest simplicial degree");
  CLI::App* kg = app.add_subcommand("k-groups");
  kg->add_option("--p", spec.p)->required();
  kg->add_option("--n", spec.n)->required();
  CLI::App* rp = app.add_subcommand("reproduce-paper");
  rp->add_option("--p", p_text, "comma separated primes");
  rp->add_option("--n", n_text, "comma separated levels");
  rp->add_option("--threads", spec.threads, "worker threads (0: all cores)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    spec.command = app.get_subcommands().front()->get_name();
    spec.format = format == "json" ? Format::Json : Format::Text;
    for (const CLI::Option* o : degree_options)
      if (o->count() > 0) spec.max_degree = max_degree;
    if (spec.command == "reproduce-paper") {
      spec.p_list = parse_list<long>(p_text);
      spec.n_list = parse_list<int>(n_text);
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return InvalidArguments;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return InvalidArguments;
  }
  return run(spec, out, err);
}

}  // namespace hcz::cli
