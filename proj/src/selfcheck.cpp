#include "pars/selfcheck.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pars/acquisition.hpp"
#include "pars/colorize.hpp"
#include "pars/dataset.hpp"
#include "pars/errors.hpp"
#include "pars/gridding.hpp"
#include "pars/rng.hpp"
#include "pars/signal.hpp"

namespace pars {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CheckResult check_plan_throughput() {
  ScanParams p;
  p.fov_x_um = 1000.0;
  p.fov_y_um = 1000.0;
  p.step_um = 0.9;
  p.rep_rate_hz = 1000.0;
  p.wavelengths_nm = {250.0};
  const ScanPlan slow = plan_scan(p);

  ScanParams q;
  q.fov_x_um = 175.0;
  q.fov_y_um = 175.0;
  q.point_count = 100000;
  q.rep_rate_hz = 20000.0;
  q.wavelengths_nm = {266.0};
  const ScanPlan fast = plan_scan(q);

  const bool ok = slow.pulses_per_wavelength == 1236544ULL &&
                  std::abs(slow.per_wavelength_duration_s - 1236.544) < 1e-6 &&
                  fast.total_duration_s == 5.0 && fast.frame_rate_hz == 1.0 / 5.0;
  std::ostringstream d;
  d << slow.pulses_per_wavelength << " pulses, " << slow.per_wavelength_duration_s << " s; "
    << fast.total_duration_s << " s at " << fast.frame_rate_hz << " fps";
  return {"plan throughput arithmetic", ok, d.str()};
}

CheckResult check_trajectory_lattice() {
  ScanParams p;
  p.mode = ScanMode::mechanical;
  p.fov_x_um = 2.0;
  p.fov_y_um = 2.0;
  p.step_um = 1.0;
  p.rep_rate_hz = 1000.0;
  p.wavelengths_nm = {250.0};
  const auto pts = generate_trajectory(plan_scan(p), 1);
  bool ok = pts.size() == 9;
  if (ok) {
    const double expect[9][2] = {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {1, 1},
                                 {0, 1}, {0, 2}, {1, 2}, {2, 2}};
    for (int k = 0; k < 9; ++k)
      ok = ok && pts[k].x_um == expect[k][0] && pts[k].y_um == expect[k][1];
  }
  return {"mechanical serpentine lattice", ok, std::to_string(pts.size()) + " points"};
}

CheckResult check_forward_model() {
  const auto phantom = make_uniform_phantom(50.0, 50.0, 0.5, 0.5f, 0.25f);
  const auto spectra = AbsorptionSpectrum::defaults();
  ScanParams p;
  p.fov_x_um = 50.0;
  p.fov_y_um = 50.0;
  p.step_um = 1.0;
  p.rep_rate_hz = 1000.0;
  p.wavelengths_nm = {250.0};
  p.pulse_energy_nj = 10.0;
  const ScanPlan plan = plan_scan(p);
  const DigitizerParams dig;
  const double absorption = 0.5 * spectra.dna.at(250.0) + 0.25 * spectra.cytochrome.at(250.0);
  const double m = dig.gain * p.pulse_energy_nj * absorption;
  const Trace t = simulate_trace(phantom, spectra, 25.0, 25.0, 250.0, plan, {}, 7, dig);
  const double amp = pars_amplitude(t);
  const bool ok = std::abs(amp - m) <= 0.01 * m;
  std::ostringstream d;
  d << "amplitude " << amp << " vs modulation " << m;
  return {"forward model inverts through envelopes", ok, d.str()};
}

CheckResult check_envelope_constant() {
  Trace t;
  t.pre_trigger_samples = 8;
  t.samples.assign(64, 123);
  const auto env = extract_envelopes(t);
  bool ok = true;
  for (std::size_t i = 0; i < t.samples.size(); ++i)
    ok = ok && env.upper[i] == 123.0 && env.lower[i] == 123.0;
  ok = ok && pars_amplitude(t) == 0.0;
  return {"constant-trace envelopes collapse", ok, ""};
}

CheckResult check_gridding_oracle() {
  Rng rng(42);
  std::vector<AmplitudeRecord> records;
  for (int k = 0; k < 300; ++k)
    records.push_back({rng.uniform(0.0, 23.0), rng.uniform(0.0, 23.0), rng.uniform(0.0, 100.0)});
  GridSpec spec;
  spec.pitch_um = 1.0;
  spec.nx = 24;
  spec.ny = 24;
  const double radius = 1.5;
  const auto grid = fit_to_grid(records, spec, radius);

  bool ok = true;
  for (int j = 0; j < spec.ny && ok; ++j)
    for (int i = 0; i < spec.nx && ok; ++i) {
      double best_d2 = radius * radius;
      int best = -1;
      for (std::size_t k = 0; k < records.size(); ++k) {
        const double dx = spec.origin_x_um + i * spec.pitch_um - records[k].x_um;
        const double dy = spec.origin_y_um + j * spec.pitch_um - records[k].y_um;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best_d2 || (d2 == best_d2 && best < 0)) {
          best_d2 = d2;
          best = static_cast<int>(k);
        }
      }
      if (best < 0)
        ok = grid.node_state(i, j) == NodeState::missing;
      else
        ok = grid.node_state(i, j) == NodeState::direct &&
             grid.value(i, j) == records[best].amplitude;
    }
  return {"nearest-neighbor fit matches brute force", ok, "300 records on 24x24"};
}

CheckResult check_interpolation_row() {
  AmplitudeGrid g;
  g.spec.pitch_um = 1.0;
  g.spec.nx = 4;
  g.spec.ny = 1;
  g.values = {4.0, 0.0, 0.0, 10.0};
  g.state = {NodeState::direct, NodeState::missing, NodeState::missing, NodeState::direct};
  const auto filled = interpolate_gaps(g);
  const bool ok = filled.values[0] == 4.0 && filled.values[1] == 6.0 && filled.values[2] == 8.0 &&
                  filled.values[3] == 10.0;
  return {"linear gap interpolation", ok, "[4,_,_,10] -> [4,6,8,10]"};
}

CheckResult check_hne_identities() {
  const StainProfile profile;
  AmplitudeGrid n, e;
  n.spec.nx = e.spec.nx = 2;
  n.spec.ny = e.spec.ny = 1;
  n.spec.pitch_um = e.spec.pitch_um = 1.0;
  n.values = {0.0, 0.0};
  e.values = {0.0, 0.0};
  n.state = e.state = {NodeState::direct, NodeState::direct};
  const std::vector<std::uint8_t> mask = {1, 0};
  const RgbImage img = mix_hne(n, e, mask, profile);
  bool ok = img.at(0, 0)[0] == 1.0f && img.at(0, 0)[1] == 1.0f && img.at(0, 0)[2] == 1.0f;
  ok = ok && img.at(1, 0) == profile.background_color;

  // pure stains keep their hue ordering
  const float bh = std::exp(-profile.hematoxylin_absorbance[2]);
  const float rh = std::exp(-profile.hematoxylin_absorbance[0]);
  const float be = std::exp(-profile.eosin_absorbance[2]);
  const float re = std::exp(-profile.eosin_absorbance[0]);
  ok = ok && bh > rh && re > be;
  return {"H&E mixing identities", ok, ""};
}

CheckResult check_dataset_roundtrip() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path();
  const std::string p1 = (dir / "pars_selfcheck_a.pars").string();
  const std::string p2 = (dir / "pars_selfcheck_b.pars").string();

  ScanParams params;
  params.mode = ScanMode::optical;
  params.fov_x_um = 4.0;
  params.fov_y_um = 4.0;
  params.step_um = 1.0;
  params.rep_rate_hz = 1000.0;
  params.wavelengths_nm = {250.0, 420.0};
  const ScanPlan plan = plan_scan(params);

  Dataset ds;
  ds.plan = plan;
  Rng rng(11);
  for (std::uint64_t k = 0; k < 10; ++k) {
    InterrogationRecord rec;
    rec.x_um = rng.uniform(0.0, 4.0);
    rec.y_um = rng.uniform(0.0, 4.0);
    rec.wavelength_nm = (k % 2) ? 420.0 : 250.0;
    rec.pulse_index = k;
    rec.trace.samples.resize(48);
    for (auto& s : rec.trace.samples)
      s = static_cast<std::int16_t>(static_cast<int>(rng.index(16384)) - 8192);
    ds.records.push_back(rec);
  }

  write_dataset(ds, p1);
  const Dataset back = read_dataset(p1);
  write_dataset(back, p2);
  bool ok = read_file(p1) == read_file(p2) && back.records.size() == ds.records.size();

  // truncation must error, not crash
  const std::string full = read_file(p1);
  std::ofstream trunc(p1, std::ios::binary);
  trunc.write(full.data(), static_cast<std::streamsize>(full.size() / 2));
  trunc.close();
  bool threw = false;
  try {
    read_dataset(p1);
  } catch (const CorruptDatasetError&) {
    threw = true;
  }
  ok = ok && threw;
  std::error_code ec;
  fs::remove(p1, ec);
  fs::remove(p2, ec);
  return {"dataset round-trip and truncation", ok, ""};
}

}  // namespace

std::vector<CheckResult> run_selfchecks() {
  return {
      check_plan_throughput(),  check_trajectory_lattice(), check_forward_model(),
      check_envelope_constant(), check_gridding_oracle(),    check_interpolation_row(),
      check_hne_identities(),    check_dataset_roundtrip(),
  };
}

}  // namespace pars
