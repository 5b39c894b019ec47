#include "pars/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "pars/errors.hpp"

namespace pars {

namespace {

static_assert(std::endian::native == std::endian::little,
              "serialization below assumes a little-endian host");

template <typename T>
void put(std::string& buf, T v) {
  char raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  buf.append(raw, sizeof(T));
}

class Reader {
 public:
  Reader(const std::string& path) : in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open dataset: " + path);
  }

  template <typename T>
  T get(std::uint64_t record) {
    T v;
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (in_.gcount() != sizeof(T))
      throw CorruptDatasetError("dataset truncated", record, offset_ + in_.gcount());
    offset_ += sizeof(T);
    return v;
  }

  void get_samples(std::int16_t* out, std::size_t n, std::uint64_t record) {
    const std::streamsize bytes = static_cast<std::streamsize>(n * sizeof(std::int16_t));
    in_.read(reinterpret_cast<char*>(out), bytes);
    if (in_.gcount() != bytes)
      throw CorruptDatasetError("dataset truncated inside trace", record, offset_ + in_.gcount());
    offset_ += static_cast<std::uint64_t>(bytes);
  }

  bool at_eof() {
    in_.peek();
    return in_.eof();
  }

  std::uint64_t offset() const { return offset_; }

 private:
  std::ifstream in_;
  std::uint64_t offset_ = 0;
};

}  // namespace

void write_dataset(const Dataset& dataset, const std::string& path) {
  const ScanParams& p = dataset.plan.params;
  const auto& wavelengths = p.wavelengths_nm;

  for (std::size_t k = 0; k < dataset.records.size(); ++k) {
    const auto& rec = dataset.records[k];
    const float wl = static_cast<float>(rec.wavelength_nm);
    const bool known = std::any_of(wavelengths.begin(), wavelengths.end(), [wl](double w) {
      return static_cast<float>(w) == wl;
    });
    if (!known)
      throw InvalidSpecError("record " + std::to_string(k) +
                             " has a wavelength missing from the plan");
    if (rec.trace.sample_rate_hz != dataset.sample_rate_hz ||
        rec.trace.pre_trigger_samples != dataset.pre_trigger_samples)
      throw InvalidSpecError("record " + std::to_string(k) +
                             " trace configuration differs from the dataset header");
  }

  std::string buf;
  buf.reserve(kDatasetHeaderBytes + dataset.records.size() * 64);
  buf.append("PARS", 4);
  put<std::uint16_t>(buf, kDatasetVersion);
  put<std::uint8_t>(buf, static_cast<std::uint8_t>(p.mode));
  put<std::uint8_t>(buf, p.point_count ? 1 : 0);
  put<std::uint16_t>(buf, static_cast<std::uint16_t>(wavelengths.size()));
  put<double>(buf, dataset.sample_rate_hz);
  put<std::uint32_t>(buf, dataset.pre_trigger_samples);
  put<std::uint64_t>(buf, dataset.records.size());
  put<double>(buf, p.fov_x_um);
  put<double>(buf, p.point_count ? static_cast<double>(*p.point_count) : p.step_um.value_or(0.0));
  put<double>(buf, p.rep_rate_hz);
  for (double w : wavelengths) put<float>(buf, static_cast<float>(w));

  for (const auto& rec : dataset.records) {
    put<double>(buf, rec.x_um);
    put<double>(buf, rec.y_um);
    put<float>(buf, static_cast<float>(rec.wavelength_nm));
    put<std::uint64_t>(buf, rec.pulse_index);
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(rec.trace.samples.size()));
    buf.append(reinterpret_cast<const char*>(rec.trace.samples.data()),
               rec.trace.samples.size() * sizeof(std::int16_t));
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed: " + path);
}

void write_dataset(const std::vector<InterrogationRecord>& records, const ScanPlan& plan,
                   const std::string& path) {
  Dataset ds;
  ds.plan = plan;
  if (!records.empty()) {
    ds.sample_rate_hz = records.front().trace.sample_rate_hz;
    ds.pre_trigger_samples = records.front().trace.pre_trigger_samples;
  }
  ds.records = records;
  write_dataset(ds, path);
}

Dataset read_dataset(const std::string& path) {
  Reader in(path);

  char magic[4];
  for (int i = 0; i < 4; ++i) magic[i] = in.get<char>(0);
  if (std::memcmp(magic, "PARS", 4) != 0)
    throw UnsupportedFormatError("bad magic; not a PARS dataset: " + path);
  const auto version = in.get<std::uint16_t>(0);
  if (version != kDatasetVersion)
    throw UnsupportedFormatError("unsupported dataset version " + std::to_string(version));

  const auto mode = in.get<std::uint8_t>(0);
  const auto sampling = in.get<std::uint8_t>(0);
  if (mode > 1 || sampling > 1)
    throw CorruptDatasetError("invalid mode/sampling byte", 0, in.offset());
  const auto wl_count = in.get<std::uint16_t>(0);
  const double sample_rate = in.get<double>(0);
  const auto pre_trigger = in.get<std::uint32_t>(0);
  const auto record_count = in.get<std::uint64_t>(0);
  const double fov = in.get<double>(0);
  const double step_or_points = in.get<double>(0);
  const double rep_rate = in.get<double>(0);

  ScanParams params;
  params.mode = static_cast<ScanMode>(mode);
  params.fov_x_um = fov;
  params.fov_y_um = fov;
  if (sampling == 0)
    params.step_um = step_or_points;
  else
    params.point_count = static_cast<std::uint64_t>(step_or_points);
  params.rep_rate_hz = rep_rate;
  // plan echoes carry no energy bounds; accept whatever was recorded
  params.energy_min_nj = 0.0;
  params.energy_max_nj = 1e9;

  std::vector<float> table(wl_count);
  for (std::uint16_t k = 0; k < wl_count; ++k) table[k] = in.get<float>(0);
  params.wavelengths_nm.assign(table.begin(), table.end());

  Dataset ds;
  ds.plan = plan_scan(params);
  ds.sample_rate_hz = sample_rate;
  ds.pre_trigger_samples = pre_trigger;
  ds.records.resize(record_count);

  for (std::uint64_t r = 0; r < record_count; ++r) {
    InterrogationRecord& rec = ds.records[r];
    rec.x_um = in.get<double>(r);
    rec.y_um = in.get<double>(r);
    const float wl = in.get<float>(r);
    if (std::find(table.begin(), table.end(), wl) == table.end())
      throw CorruptDatasetError("record wavelength missing from header table", r, in.offset());
    rec.wavelength_nm = wl;
    rec.pulse_index = in.get<std::uint64_t>(r);
    const auto n_samples = in.get<std::uint32_t>(r);
    if (n_samples > (1u << 24))
      throw CorruptDatasetError("implausible sample count", r, in.offset());
    rec.trace.sample_rate_hz = sample_rate;
    rec.trace.pre_trigger_samples = pre_trigger;
    rec.trace.samples.resize(n_samples);
    in.get_samples(rec.trace.samples.data(), n_samples, r);
  }

  if (!in.at_eof())
    throw CorruptDatasetError("trailing bytes after the last record", record_count, in.offset());
  return ds;
}

}  // namespace pars
