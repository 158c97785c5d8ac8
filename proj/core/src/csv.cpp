#include "poikit/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace poikit::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_fixed(double v, int places) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", places, v);
  return buf;
}

std::vector<std::string> split_fields(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == delim) {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::optional<double> parse_double_field(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_int_field(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

namespace {

/// Header-driven column lookup: col("lat") yields the field for this row or
/// an empty string when the column does not exist.
class HeaderMap {
 public:
  HeaderMap(const std::string& header_line, char delim) {
    auto names = split_fields(header_line, delim);
    for (std::size_t i = 0; i < names.size(); ++i) index_[names[i]] = i;
  }

  bool has(const std::string& name) const { return index_.count(name) > 0; }

  const std::string& field(const std::vector<std::string>& row,
                           const std::string& name) const {
    static const std::string kEmpty;
    auto it = index_.find(name);
    if (it == index_.end() || it->second >= row.size()) return kEmpty;
    return row[it->second];
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path);
  return in;
}

std::ofstream create_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot create output file: " + path);
  return out;
}

void require_columns(const HeaderMap& header, std::initializer_list<const char*> names,
                     const std::string& path) {
  for (const char* name : names)
    if (!header.has(name))
      throw InputError(path + ": header is missing required column '" + name + "'");
}

}  // namespace

ReadResult<LocationSample> read_location_file(const std::string& path) {
  auto in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file, expected a header row");
  HeaderMap header(line, ',');
  require_columns(header, {"user_id", "t", "lat", "lon", "accuracy"}, path);

  ReadResult<LocationSample> result;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    ++result.rows;
    auto row = split_fields(line, ',');
    auto reject = [&](std::string why) {
      result.rejects.push_back({lineno, std::move(why)});
    };

    LocationSample s;
    s.user_id = header.field(row, "user_id");
    auto t = parse_int_field(header.field(row, "t"));
    auto lat = parse_double_field(header.field(row, "lat"));
    auto lon = parse_double_field(header.field(row, "lon"));
    auto acc = parse_double_field(header.field(row, "accuracy"));
    if (!t) {
      reject("bad timestamp '" + header.field(row, "t") + "'");
      continue;
    }
    if (!lat || !lon || !acc) {
      reject("non-numeric or non-finite coordinate/accuracy field");
      continue;
    }
    s.t = *t;
    s.lat = *lat;
    s.lon = *lon;
    s.accuracy = *acc;
    if (auto err = check_location(s)) {
      reject(*err);
      continue;
    }
    result.samples.push_back(std::move(s));
  }
  return result;
}

ReadResult<SensorSample> read_sensor_file(const std::string& path) {
  auto in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file, expected a header row");
  HeaderMap header(line, ',');
  require_columns(header, {"user_id", "t"}, path);

  ReadResult<SensorSample> result;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    ++result.rows;
    auto row = split_fields(line, ',');
    auto reject = [&](std::string why) {
      result.rejects.push_back({lineno, std::move(why)});
    };

    SensorSample s;
    s.user_id = header.field(row, "user_id");
    auto t = parse_int_field(header.field(row, "t"));
    if (!t) {
      reject("bad timestamp '" + header.field(row, "t") + "'");
      continue;
    }
    s.t = *t;

    bool bad = false;
    auto numeric = [&](const char* name) -> std::optional<double> {
      const std::string& f = header.field(row, name);
      if (f.empty()) return std::nullopt;
      auto v = parse_double_field(f);
      if (!v) {
        reject(std::string("bad number in column '") + name + "'");
        bad = true;
      }
      return v;
    };
    s.velocity = numeric("velocity");
    if (bad) continue;
    s.accuracy = numeric("accuracy");
    if (bad) continue;
    s.noise_raw = numeric("noise_raw");
    if (bad) continue;
    s.noise_norm = numeric("noise_norm");
    if (bad) continue;
    if (const std::string& b = header.field(row, "battery_charging"); !b.empty()) {
      auto v = parse_int_field(b);
      if (!v) {
        reject("bad number in column 'battery_charging'");
        continue;
      }
      s.battery_charging = static_cast<int>(*v);
    }
    s.light = numeric("light");
    if (bad) continue;

    const std::string& act = header.field(row, "activity");
    if (!act.empty()) {
      s.activity = activity_from_string(act);
      if (!s.activity) {
        reject("unknown activity label '" + act + "'");
        continue;
      }
    }
    if (auto err = check_sensor(s)) {
      reject(*err);
      continue;
    }
    result.samples.push_back(std::move(s));
  }
  return result;
}

void write_location_file(const std::string& path,
                         const std::vector<LocationSample>& samples) {
  auto out = create_or_throw(path);
  out << "user_id,t,lat,lon,accuracy\n";
  for (const auto& s : samples)
    out << s.user_id << ',' << s.t << ',' << format_double(s.lat) << ','
        << format_double(s.lon) << ',' << format_double(s.accuracy) << '\n';
}

void write_sensor_file(const std::string& path,
                       const std::vector<SensorSample>& samples) {
  auto out = create_or_throw(path);
  out << "user_id,t,velocity,accuracy,noise_raw,noise_norm,battery_charging,light,activity\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (const auto& s : samples) {
    out << s.user_id << ',' << s.t << ',' << opt(s.velocity) << ',' << opt(s.accuracy)
        << ',' << opt(s.noise_raw) << ',' << opt(s.noise_norm) << ','
        << (s.battery_charging ? std::to_string(*s.battery_charging) : std::string())
        << ',' << opt(s.light) << ','
        << (s.activity ? std::string(to_string(*s.activity)) : std::string()) << '\n';
  }
}

void write_stay_points_file(const std::string& path,
                            const std::vector<UserStayPoints>& users) {
  auto out = create_or_throw(path);
  out << "user_id\tsp_index\tcentroid_lat\tcentroid_lon\tt_arrive\tt_depart\t"
         "mean_accuracy\tmember_begin\tmember_end\n";
  for (const auto& u : users) {
    for (std::size_t i = 0; i < u.stay_points.size(); ++i) {
      const auto& sp = u.stay_points[i];
      out << u.user_id << '\t' << i << '\t' << format_double(sp.centroid_lat) << '\t'
          << format_double(sp.centroid_lon) << '\t' << sp.t_arrive << '\t'
          << sp.t_depart << '\t' << format_double(sp.mean_accuracy) << '\t'
          << sp.member_begin << '\t' << sp.member_end << '\n';
    }
  }
}

namespace {

template <typename User>
User& user_slot(std::vector<User>& users, const std::string& id) {
  for (auto it = users.rbegin(); it != users.rend(); ++it)
    if (it->user_id == id) return *it;
  users.push_back(User{});
  users.back().user_id = id;
  return users.back();
}

std::int64_t int_or_throw(const std::string& field, const std::string& path,
                          std::size_t lineno) {
  auto v = parse_int_field(field);
  if (!v)
    throw InputError(path + ":" + std::to_string(lineno) + ": bad integer '" + field + "'");
  return *v;
}

double double_or_throw(const std::string& field, const std::string& path,
                       std::size_t lineno) {
  auto v = parse_double_field(field);
  if (!v)
    throw InputError(path + ":" + std::to_string(lineno) + ": bad number '" + field + "'");
  return *v;
}

}  // namespace

std::vector<UserStayPoints> read_stay_points_file(const std::string& path) {
  auto in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file");
  HeaderMap header(line, '\t');
  require_columns(header,
                  {"user_id", "sp_index", "centroid_lat", "centroid_lon", "t_arrive",
                   "t_depart", "mean_accuracy", "member_begin", "member_end"},
                  path);

  std::vector<UserStayPoints> users;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto row = split_fields(line, '\t');
    StayPoint sp;
    sp.centroid_lat = double_or_throw(header.field(row, "centroid_lat"), path, lineno);
    sp.centroid_lon = double_or_throw(header.field(row, "centroid_lon"), path, lineno);
    sp.t_arrive = int_or_throw(header.field(row, "t_arrive"), path, lineno);
    sp.t_depart = int_or_throw(header.field(row, "t_depart"), path, lineno);
    sp.mean_accuracy = double_or_throw(header.field(row, "mean_accuracy"), path, lineno);
    sp.member_begin =
        static_cast<std::size_t>(int_or_throw(header.field(row, "member_begin"), path, lineno));
    sp.member_end =
        static_cast<std::size_t>(int_or_throw(header.field(row, "member_end"), path, lineno));
    user_slot(users, header.field(row, "user_id")).stay_points.push_back(sp);
  }
  return users;
}

void write_assignments_file(const std::string& path,
                            const std::vector<UserAssignments>& users) {
  auto out = create_or_throw(path);
  out << "user_id\tsp_index\tcluster_id\n";
  for (const auto& u : users)
    for (std::size_t i = 0; i < u.cluster_ids.size(); ++i)
      out << u.user_id << '\t' << i << '\t' << u.cluster_ids[i] << '\n';
}

std::vector<UserAssignments> read_assignments_file(const std::string& path) {
  auto in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file");
  HeaderMap header(line, '\t');
  require_columns(header, {"user_id", "sp_index", "cluster_id"}, path);

  std::vector<UserAssignments> users;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto row = split_fields(line, '\t');
    auto& user = user_slot(users, header.field(row, "user_id"));
    const auto idx =
        static_cast<std::size_t>(int_or_throw(header.field(row, "sp_index"), path, lineno));
    if (idx != user.cluster_ids.size())
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": sp_index out of order within user");
    user.cluster_ids.push_back(
        static_cast<int>(int_or_throw(header.field(row, "cluster_id"), path, lineno)));
  }
  return users;
}

void write_trajectory_file(const std::string& path,
                           const std::vector<UserTrajectory>& users) {
  auto out = create_or_throw(path);
  out << "user_id\tcluster_id\tt_arrive\tt_depart\n";
  for (const auto& u : users)
    for (const auto& v : u.visits)
      out << u.user_id << '\t' << v.cluster_id << '\t' << v.t_arrive << '\t'
          << v.t_depart << '\n';
}

std::vector<UserTrajectory> read_trajectory_file(const std::string& path) {
  auto in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file");
  HeaderMap header(line, '\t');
  require_columns(header, {"user_id", "cluster_id", "t_arrive", "t_depart"}, path);

  std::vector<UserTrajectory> users;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto row = split_fields(line, '\t');
    Visit v;
    v.cluster_id = static_cast<int>(int_or_throw(header.field(row, "cluster_id"), path, lineno));
    v.t_arrive = int_or_throw(header.field(row, "t_arrive"), path, lineno);
    v.t_depart = int_or_throw(header.field(row, "t_depart"), path, lineno);
    user_slot(users, header.field(row, "user_id")).visits.push_back(v);
  }
  return users;
}

namespace {

std::string opt_percent(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("-");
}

std::optional<double> parse_opt_percent(const std::string& field, const std::string& path,
                                        std::size_t lineno) {
  if (field == "-") return std::nullopt;
  return double_or_throw(field, path, lineno);
}

}  // namespace

void write_env_reports_file(const std::string& path,
                            const std::vector<UserEnvReports>& users) {
  auto out = create_or_throw(path);
  out << "user_id\tcluster_id\tn_slots\tp1\tp2\tp3\tp4\tp0\tio_label\tpp_label\t"
         "low_confidence\n";
  for (const auto& u : users) {
    for (const auto& r : u.reports) {
      out << u.user_id << '\t' << r.poi_cluster_id << '\t' << r.n_slots << '\t'
          << opt_percent(r.p1) << '\t' << opt_percent(r.p2) << '\t' << opt_percent(r.p3)
          << '\t' << opt_percent(r.p4) << '\t' << format_double(r.p0) << '\t'
          << to_string(r.io_label) << '\t' << to_string(r.pp_label) << '\t'
          << (r.low_confidence ? 1 : 0) << '\n';
    }
  }
}

std::vector<UserEnvReports> read_env_reports_file(const std::string& path) {
  auto in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file");
  HeaderMap header(line, '\t');
  require_columns(header,
                  {"user_id", "cluster_id", "n_slots", "p1", "p2", "p3", "p4", "p0",
                   "io_label", "pp_label", "low_confidence"},
                  path);

  std::vector<UserEnvReports> users;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto row = split_fields(line, '\t');
    EnvReport r;
    r.poi_cluster_id =
        static_cast<int>(int_or_throw(header.field(row, "cluster_id"), path, lineno));
    r.n_slots =
        static_cast<std::size_t>(int_or_throw(header.field(row, "n_slots"), path, lineno));
    r.p1 = parse_opt_percent(header.field(row, "p1"), path, lineno);
    r.p2 = parse_opt_percent(header.field(row, "p2"), path, lineno);
    r.p3 = parse_opt_percent(header.field(row, "p3"), path, lineno);
    r.p4 = parse_opt_percent(header.field(row, "p4"), path, lineno);
    r.p0 = double_or_throw(header.field(row, "p0"), path, lineno);
    auto io = io_label_from_string(header.field(row, "io_label"));
    auto pp = pp_label_from_string(header.field(row, "pp_label"));
    if (!io || !pp)
      throw InputError(path + ":" + std::to_string(lineno) + ": bad label field");
    r.io_label = *io;
    r.pp_label = *pp;
    r.low_confidence = int_or_throw(header.field(row, "low_confidence"), path, lineno) != 0;
    user_slot(users, header.field(row, "user_id")).reports.push_back(r);
  }
  return users;
}

void write_rejects_file(const std::string& path, const std::string& source,
                        const std::vector<RowError>& rejects, bool append) {
  std::ofstream out(path, append ? std::ios::app : std::ios::out);
  if (!out) throw InputError("cannot create output file: " + path);
  if (!append) out << "source\tline\treason\n";
  for (const auto& r : rejects)
    out << source << '\t' << r.line << '\t' << r.message << '\n';
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file: " + path);
  std::uint64_t hash = 1469598103934665603ull;  // FNV offset basis
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ull;  // FNV prime
    }
  }
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
  return std::string("fnv1a64:") + hex;
}

}  // namespace poikit::io
