#include "rta/store.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "rta/csv.hpp"
#include "rta/errors.hpp"
#include "rta/metrics.hpp"
#include "rta/reconstruct.hpp"

namespace rta {

namespace {

constexpr const char* kChecksumKey = "checksum_fnv1a64";

void put_le(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) {
    out.push_back(static_cast<char>(bits & 0xffU));
    bits >>= 8;
  }
}

double get_le(const char* p) {
  std::uint64_t bits = 0;
  for (int b = 7; b >= 0; --b) {
    bits = (bits << 8) | static_cast<unsigned char>(p[b]);
  }
  return std::bit_cast<double>(bits);
}

std::size_t parse_count(std::string_view text, std::size_t line) {
  std::size_t v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ParseError("line " + std::to_string(line) + ": not a non-negative integer: '" +
                     std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::string serialize_trajectory(const Trajectory& traj) {
  const std::size_t n = traj.mesh.n_cells();
  std::string header;
  header += "format_version=1\n";
  header += "mu_i=" + format_double(traj.mu_i) + "\n";
  header += "nu_i=" + format_double(traj.nu_i) + "\n";
  header += "dt=" + format_double(traj.dt) + "\n";
  header += "n_cells=" + std::to_string(n) + "\n";
  header += "x_min=" + format_double(traj.mesh.x_min()) + "\n";
  header += "x_max=" + format_double(traj.mesh.x_max()) + "\n";
  header += "n_steps=" + std::to_string(traj.n_steps()) + "\n";

  std::string payload;
  payload.reserve(traj.fields.size() * n * 8);
  for (const CellField& f : traj.fields) {
    if (!(f.mesh() == traj.mesh)) {
      throw IncompatibleDiscretization("trajectory fields do not share one mesh");
    }
    for (double v : f.values()) put_le(payload, v);
  }
  const std::uint64_t sum = fnv1a64(payload, fnv1a64(header));
  return header + kChecksumKey + "=" + hex64(sum) + "\n\n" + payload;
}

Trajectory deserialize_trajectory(std::string_view bytes) {
  std::map<std::string, std::string> meta;
  std::optional<std::string> checksum;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  std::size_t checksum_start = std::string_view::npos;
  bool blank_seen = false;
  while (pos < bytes.size()) {
    const std::size_t eol = bytes.find('\n', pos);
    if (eol == std::string_view::npos) break;
    ++line_no;
    const std::string_view line = bytes.substr(pos, eol - pos);
    const std::size_t line_start = pos;
    pos = eol + 1;
    if (line.empty()) {
      blank_seen = true;
      break;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ParseError("line " + std::to_string(line_no) + ": expected key=value, got '" +
                       std::string(line.substr(0, 64)) + "'");
    }
    std::string key(line.substr(0, eq));
    std::string value(line.substr(eq + 1));
    if (key == kChecksumKey) {
      checksum = value;
      checksum_start = line_start;
      continue;
    }
    if (checksum) {
      throw ParseError("line " + std::to_string(line_no) + ": '" + key +
                       "' after the checksum record");
    }
    static const std::set<std::string> known = {"format_version", "mu_i",  "nu_i",  "dt",
                                                "n_cells",        "x_min", "x_max", "n_steps"};
    if (!known.count(key)) {
      throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (meta.count(key)) {
      throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    meta.emplace(std::move(key), std::move(value));
  }
  if (!blank_seen) throw ParseError("header is not terminated by a blank line");

  for (const char* key : {"format_version", "mu_i", "nu_i", "dt", "n_cells", "x_min", "x_max",
                          "n_steps"}) {
    if (!meta.count(key)) throw ParseError(std::string("missing header key '") + key + "'");
  }
  if (meta["format_version"] != "1") {
    throw ParseError("unsupported format_version '" + meta["format_version"] + "'");
  }

  auto number = [&](const char* key) {
    try {
      return parse_double(meta[key]);
    } catch (const ParseError& e) {
      throw ParseError(std::string("header key '") + key + "': " + e.what());
    }
  };
  const double mu_i = number("mu_i");
  const double nu_i = number("nu_i");
  const double dt = number("dt");
  const double x_min = number("x_min");
  const double x_max = number("x_max");
  const std::size_t n_cells = parse_count(meta["n_cells"], 0);
  const std::size_t n_steps = parse_count(meta["n_steps"], 0);

  const std::string_view payload = bytes.substr(pos);
  if (n_steps >= std::numeric_limits<std::size_t>::max() / 8 / std::max<std::size_t>(n_cells, 1)) {
    throw IntegrityError("header declares an impossible value count");
  }
  const std::size_t expected = (n_steps + 1) * n_cells * 8;
  if (payload.size() != expected) {
    throw IntegrityError("payload holds " + std::to_string(payload.size()) + " bytes, header (" +
                         std::to_string(n_steps + 1) + " steps x " + std::to_string(n_cells) +
                         " cells) requires " + std::to_string(expected));
  }
  if (checksum) {
    const std::string_view header = bytes.substr(0, checksum_start);
    if (hex64(fnv1a64(payload, fnv1a64(header))) != *checksum) {
      throw IntegrityError("checksum mismatch: file contents were altered");
    }
  }

  std::optional<Mesh1D> mesh;
  try {
    mesh.emplace(x_min, x_max, n_cells);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("header describes an invalid mesh: ") + e.what());
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParseError("header key 'dt': must be positive");

  Trajectory traj{*mesh, mu_i, nu_i, dt, {}};
  traj.fields.reserve(n_steps + 1);
  const char* p = payload.data();
  for (std::size_t k = 0; k <= n_steps; ++k) {
    std::vector<double> values(n_cells);
    for (std::size_t j = 0; j < n_cells; ++j, p += 8) values[j] = get_le(p);
    try {
      traj.fields.emplace_back(*mesh, std::move(values));
    } catch (const InvalidArgument& e) {
      throw IntegrityError("time index " + std::to_string(k) + ": " + e.what());
    }
  }
  return traj;
}

void save_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_trajectory(traj));
}

Trajectory load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return deserialize_trajectory(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const IntegrityError& e) {
    throw IntegrityError(path.string() + ": " + e.what());
  }
}

void SnapshotStore::add(Trajectory traj) {
  if (!entries_.empty()) {
    const Trajectory& ref = entries_.begin()->second;
    if (!(traj.mesh == ref.mesh) || traj.dt != ref.dt) {
      throw IncompatibleDiscretization("snapshot mu_i = " + format_double(traj.mu_i) +
                                       " does not share the store's mesh and dt");
    }
  }
  if (entries_.count(traj.mu_i)) {
    throw InvalidArgument("duplicate snapshot key mu_i = " + format_double(traj.mu_i));
  }
  const double key = traj.mu_i;
  entries_.emplace(key, std::move(traj));
}

std::vector<double> SnapshotStore::keys() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& [k, _] : entries_) out.push_back(k);
  return out;
}

const Trajectory& SnapshotStore::get(double mu_i) const {
  auto it = entries_.find(mu_i);
  if (it == entries_.end()) throw NotFound("no snapshot with mu_i = " + format_double(mu_i));
  return it->second;
}

double select_nearest(const SnapshotStore& store, double mu, const TransportModel& model) {
  if (store.empty()) throw NotFound("select_nearest: empty snapshot store");
  const double a = model.wavespeed(mu);
  double best_key = 0.0;
  double best = std::numeric_limits<double>::infinity();
  // Keys iterate in increasing order, so strict < keeps the smaller key on ties.
  for (const auto& [key, _] : store.entries()) {
    const double d = std::abs(a - model.wavespeed(key));
    if (d < best) {
      best = d;
      best_key = key;
    }
  }
  return best_key;
}

std::pair<double, double> select_best_measured(const SnapshotStore& store, double mu,
                                               std::size_t k, const CellField& reference,
                                               const TransportModel& model) {
  if (store.empty()) throw NotFound("select_best_measured: empty snapshot store");
  double best_key = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [key, traj] : store.entries()) {
    const double err = l1_abs_error(rta_reconstruct(traj, mu, k, model), reference);
    if (err < best) {
      best = err;
      best_key = key;
    }
  }
  return {best_key, best};
}

}  // namespace rta
