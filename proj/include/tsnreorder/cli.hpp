#pragma once

// Command-line front end. Kept in a header so tests can drive it in-process.
//
// Exit codes:
//   0  success
//   1  input error (unreadable file, bad schema, parse failure, unstable FIFO)
//   2  analysis finished but a configured timeout/buffer is unsafe
//   3  the simulated re-sequencing buffer discarded a packet
//   4  case-study --check found a value outside tolerance

#include "tsnreorder/tsnreorder.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace tsnreorder::cli {

enum Exit : int { ok = 0, input_error = 1, unsafe_config = 2, discard = 3, check_failed = 4 };

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Trace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return io::read_trace_csv(in);
}

/// "6400:6400,125e6:64" -> min(6400 t + 6400, 125e6 t + 64) bytes, or a JSON curve object.
inline Curve parse_curve_arg(const std::string& text) {
  auto t = std::string(tsnreorder::detail::trim(text));
  if (!t.empty() && t.front() == '{') {
    io::json j;
    try {
      j = io::json::parse(t);
    } catch (const io::json::exception& e) {
      throw InputError(std::string("--curve: ") + e.what());
    }
    return io::curve_from_json(j, "--curve");
  }
  std::vector<AffinePiece> pieces;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw InputError("--curve: expected rate:burst pairs, got '" + item + "'");
    pieces.push_back({parse_rat(item.substr(0, colon)), parse_rat(item.substr(colon + 1))});
  }
  return Curve::min_affine(std::move(pieces));
}

inline std::vector<Rat> parse_list(const std::string& text, bool time) {
  std::vector<Rat> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(time ? parse_time(item) : parse_rat(item));
  return out;
}

inline std::string us(const Rat& s) { return io::us(s); }

// ---- analyze ---------------------------------------------------------------

inline void print_csv(std::ostream& out, const std::vector<std::pair<std::string, AnalysisReport>>& reps) {
  out << "placement,loss_mode,element,kind,d_min_s,d_max_s,jitter_s,rto_s,timeout_s,buffer_bytes\n";
  for (const auto& [name, r] : reps) {
    for (const auto& e : r.elements) {
      const ResequencerReport* rr = r.resequencer(e.id);
      out << name << ',' << to_string(r.loss_mode) << ',' << e.id << ',' << to_string(e.kind) << ','
          << to_string(e.d_min) << ',' << to_string(e.d_max) << ',' << to_string(e.jitter) << ','
          << (e.rto ? to_string(*e.rto) : "") << ',' << (rr ? to_string(rr->timeout) : "") << ','
          << (rr ? to_string(rr->buffer) : "") << '\n';
    }
    out << name << ',' << to_string(r.loss_mode) << ",e2e,,"
        << to_string(r.e2e_min_delay) << ',' << to_string(r.e2e_delay) << ',' << to_string(r.e2e_jitter) << ",,,\n";
  }
}

inline int run_analyze(const std::string& config, const std::string& loss, const std::string& format,
                       std::ostream& out, std::ostream& err) {
  io::json j;
  try {
    j = io::json::parse(slurp(config));
  } catch (const io::json::exception& e) {
    throw InputError(config + ": " + e.what());
  }
  PathSpec base = io::path_from_json(j);
  std::vector<Placement> placements = io::placements_from_json(j);

  std::vector<LossMode> modes;
  if (loss == "both") {
    modes = {LossMode::lossless, LossMode::lossy};
  } else if (loss.empty()) {
    modes = {base.loss_mode};
  } else {
    modes = {io::loss_mode_from_string(loss, "--loss")};
  }

  std::vector<std::pair<std::string, AnalysisReport>> reps;
  auto run_one = [&](const std::string& name, PathSpec p) {
    for (LossMode m : modes) {
      p.loss_mode = m;
      reps.emplace_back(name, analyze_path(p));
    }
  };
  if (placements.empty()) {
    run_one("path", base);
  } else {
    for (const auto& pl : placements) run_one(pl.name, with_placement(base, pl));
  }

  if (format == "json") {
    io::json arr = io::json::array();
    for (const auto& [name, r] : reps) {
      io::json rj = io::to_json(r);
      arr.push_back({{"placement", name}, {"report", std::move(rj)}});
    }
    out << arr.dump(2) << '\n';
  } else if (format == "csv") {
    print_csv(out, reps);
  } else {
    for (std::size_t i = 0; i < reps.size(); ++i) {
      if (i) out << '\n';
      out << "== " << reps[i].first << " ==\n";
      io::print_report(out, reps[i].second);
    }
  }
  bool unsafe = false;
  for (const auto& [name, r] : reps) {
    for (const auto& w : r.warnings) err << "warning: " << name << ": " << w << '\n';
    unsafe = unsafe || r.unsafe();
  }
  return unsafe ? unsafe_config : ok;
}

// ---- metrics ---------------------------------------------------------------

inline int run_metrics(const std::string& trace_path, bool verbose, const std::string& format, std::ostream& out) {
  Trace tr = load_trace(trace_path);
  RtoResult lam = rto(tr);
  RboResult pi = rbo(tr);
  std::optional<DelayJitter> dj;
  bool any_delivered = false;
  for (const auto& p : tr.packets) any_delivered = any_delivered || !p.lost();
  if (tr.has_emit_times() && any_delivered) dj = delay_jitter(tr);

  if (format == "json") {
    io::json j;
    j["packets"] = tr.size();
    j["rto_s"] = to_string(lam.value);
    j["rbo_bytes"] = to_string(pi.value);
    if (dj) {
      j["d_max_s"] = to_string(dj->d_max);
      j["d_min_s"] = to_string(dj->d_min);
      j["jitter_s"] = to_string(dj->jitter);
    }
    if (verbose) {
      io::json per = io::json::array();
      for (const auto& p : tr.packets) {
        if (p.lost()) continue;
        per.push_back({{"index", p.index}, {"rto_s", to_string(lam.per_packet.at(p.index))},
                       {"rbo_bytes", to_string(pi.per_packet.at(p.index))}});
      }
      j["per_packet"] = std::move(per);
    }
    out << j.dump(2) << '\n';
    return ok;
  }
  std::size_t lost = 0;
  for (const auto& p : tr.packets) lost += p.lost() ? 1 : 0;
  out << "packets: " << tr.size() << " (" << lost << " lost)\n";
  out << "RTO lambda: " << to_string(lam.value) << " s (" << us(lam.value) << " us)\n";
  out << "RBO pi:     " << to_string(pi.value) << " B\n";
  if (dj) {
    out << "d_max:      " << to_string(dj->d_max) << " s (" << us(dj->d_max) << " us)\n";
    out << "d_min:      " << to_string(dj->d_min) << " s (" << us(dj->d_min) << " us)\n";
    out << "jitter V:   " << to_string(dj->jitter) << " s (" << us(dj->jitter) << " us)\n";
  } else {
    out << "delay/jitter: n/a (needs emit times and a delivered packet)\n";
  }
  if (verbose) {
    io::TextTable t({"index", "size (B)", "observed (s)", "rto (s)", "rbo (B)"});
    for (const auto& p : tr.packets) {
      if (p.lost()) {
        t.add({std::to_string(p.index), to_string(p.size), "inf", "-", "-"});
      } else {
        t.add({std::to_string(p.index), to_string(p.size), to_string(p.observe), to_string(lam.per_packet.at(p.index)),
               to_string(pi.per_packet.at(p.index))});
      }
    }
    out << '\n';
    t.print(out);
  }
  return ok;
}

// ---- simulate --------------------------------------------------------------

inline int run_simulate(const std::string& trace_path, const std::string& timeout, const std::string& buffer,
                        std::ostream& out) {
  Trace tr = load_trace(trace_path);
  ResequencerConfig cfg{parse_time(timeout), parse_rat(buffer)};
  ResequencerOutcome o = simulate(tr, cfg);
  out << io::to_json(o).dump(2) << '\n';
  return o.any_discard() ? discard : ok;
}

// ---- scenario --------------------------------------------------------------

struct ScenarioArgs {
  std::string kind;
  std::string lambda, t0 = "0", size = "64", sizes, first_size;
  std::string curve, jitter, timeout, eps, l_min = "64", l_max = "64";
  std::string stages, transfer;
  std::size_t s = 1;
  bool round_down = false;
  std::string out_path;
};

inline Trace run_scenario_trace(const ScenarioArgs& a, std::ostream& note) {
  auto need = [&](const std::string& v, const char* flag) {
    if (v.empty()) throw InputError(std::string("scenario ") + a.kind + " needs " + flag);
    return v;
  };
  auto flow = [&](const Curve& c) { return make_flow(c, parse_rat(a.l_min), parse_rat(a.l_max)); };
  if (a.kind == "thm2") return gen_thm2_violation(parse_time(need(a.lambda, "--lambda")), parse_time(a.t0), parse_rat(a.size));
  if (a.kind == "thm3-lossless") {
    auto sizes = parse_list(need(a.sizes, "--sizes"), false);
    Rat first = a.first_size.empty() ? sizes.front() : parse_rat(a.first_size);
    return gen_thm3_lossless_backlog(parse_time(need(a.lambda, "--lambda")), sizes, first);
  }
  if (a.kind == "thm3-lossy") {
    Curve c = parse_curve_arg(need(a.curve, "--curve"));
    Rat v = parse_time(need(a.jitter, "--jitter"));
    Rat t = parse_time(need(a.timeout, "--timeout"));
    Rat eps = a.eps.empty() ? min(v, t) / pow10(6) : parse_time(a.eps);
    return gen_thm3_lossy_backlog(c, v, t, eps, flow(c), {a.round_down});
  }
  if (a.kind == "thm5") {
    Curve c = parse_curve_arg(need(a.curve, "--curve"));
    return gen_thm5_rto_tight(parse_time(need(a.jitter, "--jitter")), c, parse_rat(a.l_min));
  }
  if (a.kind == "thm6") {
    Curve c = parse_curve_arg(need(a.curve, "--curve"));
    Rat v = parse_time(need(a.jitter, "--jitter"));
    Rat eps = a.eps.empty() ? v / pow10(6) : parse_time(a.eps);
    return gen_thm6_rbo_tight(v, eps, c, flow(c), {a.round_down});
  }
  if (a.kind == "thm7") {
    std::vector<Stage> st;
    std::stringstream ss(need(a.stages, "--stages"));
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto colon = item.find(':');
      if (colon == std::string::npos) throw InputError("--stages: expected V:lambda pairs");
      st.push_back({parse_time(item.substr(0, colon)), parse_time(item.substr(colon + 1))});
    }
    if (a.s < 1 || a.s > st.size()) throw InputError("--s out of range");
    Rat eps = a.eps.empty() ? st[a.s - 1].rto / pow10(6) : parse_time(a.eps);
    auto res = gen_thm7_concat_tight(st, a.s, eps, parse_rat(a.size),
                                     a.transfer.empty() ? std::vector<Rat>{} : parse_list(a.transfer, true));
    note << "# per-stage exit times (s):\n";
    for (std::size_t h = 0; h < res.exit_times.size(); ++h) {
      note << "#   stage " << h << ": " << to_string(res.exit_times[h][0]) << ", " << to_string(res.exit_times[h][1]) << '\n';
    }
    return res.end_to_end;
  }
  throw InputError("unknown scenario '" + a.kind + "' (thm2, thm3-lossless, thm3-lossy, thm5, thm6, thm7)");
}

inline int run_scenario(const ScenarioArgs& a, std::ostream& out, std::ostream& err) {
  Trace tr = run_scenario_trace(a, err);
  if (a.out_path.empty()) {
    io::write_trace_csv(out, tr);
  } else {
    std::ofstream f(a.out_path);
    if (!f) throw InputError("cannot write '" + a.out_path + "'");
    io::write_trace_csv(f, tr);
  }
  return ok;
}

// ---- case-study ------------------------------------------------------------

inline int run_case_study(const std::string& name, bool check, const std::string& format, std::ostream& out) {
  if (name != "automotive") throw InputError("unknown case study '" + name + "' (available: automotive)");
  case_study::CaseStudyRun run = case_study::run_automotive();

  if (format == "json") {
    io::json arr = io::json::array();
    for (const auto& r : run.results) {
      arr.push_back({{"placement", r.placement.name},
                     {"lossless", io::to_json(r.lossless)},
                     {"lossy", io::to_json(r.lossy)}});
    }
    out << arr.dump(2) << '\n';
  } else {
    io::TextTable t({"placement", "lossless delay (us)", "lossless jitter (us)", "lossy delay (us)", "lossy jitter (us)"});
    for (const auto& r : run.results) {
      t.add({r.placement.name, us(r.lossless.e2e_delay), us(r.lossless.e2e_jitter), us(r.lossy.e2e_delay),
             us(r.lossy.e2e_jitter)});
    }
    t.print(out);
    out << '\n';
    io::TextTable b({"placement", "buffer", "T (us)", "lossless B (B)", "lossy B (B)"});
    for (const auto& r : run.results) {
      for (const auto& x : r.lossless.resequencers) {
        const ResequencerReport* y = r.lossy.resequencer(x.id);
        b.add({r.placement.name, x.id, to_string(micros(x.timeout)), io::bytes(x.buffer), io::bytes(y->buffer)});
      }
    }
    b.print(out);
  }
  if (!check) return ok;

  auto items = case_study::check_table(run);
  auto more = case_study::check_intermediates(run);
  items.insert(items.end(), more.begin(), more.end());
  std::size_t failed = 0;
  out << '\n';
  for (const auto& it : items) {
    if (!it.pass) ++failed;
    out << (it.pass ? "PASS " : "FAIL ") << it.name << ": expected " << it.expected << ", got " << it.actual << '\n';
  }
  out << (items.size() - failed) << "/" << items.size() << " values within tolerance\n";
  return failed ? check_failed : ok;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Worst-case reordering, re-sequencing buffer and delay bounds for time-sensitive flows"};
  app.require_subcommand(1, 1);

  std::string config, loss, format = "table";
  auto* an = app.add_subcommand("analyze", "Analyse a flow path (JSON config)");
  an->add_option("--config,config", config, "Path config JSON")->required();
  an->add_option("--loss", loss, "lossless | lossy | both (default: the config's loss_mode)")
      ->check(CLI::IsMember({"lossless", "lossy", "both"}));
  an->add_option("--format", format, "table | json | csv")->check(CLI::IsMember({"table", "json", "csv"}));

  std::string trace;
  bool verbose = false;
  std::string mformat = "table";
  auto* me = app.add_subcommand("metrics", "RTO, RBO, delay and jitter of a trace CSV");
  me->add_option("--trace,trace", trace, "Trace CSV")->required();
  me->add_flag("--verbose,-v", verbose, "Per-packet detail");
  me->add_option("--format", mformat, "table | json")->check(CLI::IsMember({"table", "json"}));

  std::string strace, timeout = "inf", buffer = "inf";
  auto* si = app.add_subcommand("simulate", "Replay a trace CSV through a re-sequencing buffer");
  si->add_option("--trace,trace", strace, "Trace CSV")->required();
  si->add_option("--timeout", timeout, "Timeout T (s, or with unit suffix ms/us/ns; 'inf')");
  si->add_option("--buffer", buffer, "Buffer size B in bytes ('inf')");

  detail::ScenarioArgs sa;
  auto* sc = app.add_subcommand("scenario", "Generate a worst-case trace (CSV on stdout)");
  sc->add_option("kind", sa.kind, "thm2 | thm3-lossless | thm3-lossy | thm5 | thm6 | thm7")->required();
  sc->add_option("--lambda", sa.lambda, "RTO lambda");
  sc->add_option("--t0", sa.t0, "Time offset");
  sc->add_option("--size", sa.size, "Packet size (thm2, thm7)");
  sc->add_option("--sizes", sa.sizes, "Comma-separated sizes of overtaking packets (thm3-lossless)");
  sc->add_option("--first-size", sa.first_size, "Size of the overtaken packet (thm3-lossless)");
  sc->add_option("--curve", sa.curve, "Arrival curve: 'rate:burst,...' or a JSON curve");
  sc->add_option("--jitter", sa.jitter, "Jitter V");
  sc->add_option("--timeout", sa.timeout, "Timeout T (thm3-lossy)");
  sc->add_option("--eps", sa.eps, "Epsilon (default: target / 1e6)");
  sc->add_option("--l-min", sa.l_min, "Minimum packet size");
  sc->add_option("--l-max", sa.l_max, "Maximum packet size");
  sc->add_option("--stages", sa.stages, "thm7 stages 'V:lambda,...'");
  sc->add_option("--s", sa.s, "thm7: 1-based index of the first reordering stage");
  sc->add_option("--transfer", sa.transfer, "thm7: per-stage transfer times d_h");
  sc->add_flag("--round-down", sa.round_down, "Round the target backlog down to whole packets");
  sc->add_option("--out,-o", sa.out_path, "Write the CSV here instead of stdout");

  std::string study = "automotive", cformat = "table";
  bool check = false;
  auto* cs = app.add_subcommand("case-study", "Reproduce a built-in case study");
  cs->add_option("name", study, "Case study name (automotive)");
  cs->add_flag("--check", check, "Compare against the published values");
  cs->add_option("--format", cformat, "table | json")->check(CLI::IsMember({"table", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    // help for a subcommand arrives here too
    if (e.get_exit_code() == 0) {
      out << e.what() << '\n';
      return ok;
    }
    err << "error: " << e.what() << '\n';
    return input_error;
  }

  try {
    if (*an) return detail::run_analyze(config, loss, format, out, err);
    if (*me) return detail::run_metrics(trace, verbose, mformat, out);
    if (*si) return detail::run_simulate(strace, timeout, buffer, out);
    if (*sc) return detail::run_scenario(sa, out, err);
    if (*cs) return detail::run_case_study(study, check, cformat, out);
  } catch (const InstabilityError& e) {
    err << "error: unstable FIFO: " << e.what() << '\n';
    return input_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  }
  return input_error;
}

}  // namespace tsnreorder::cli
