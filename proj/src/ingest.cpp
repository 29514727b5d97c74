#include "bikefleet/ingest.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "bikefleet/csv.hpp"
#include "bikefleet/error.hpp"

namespace bikefleet {
namespace {

constexpr std::array<std::string_view, 6> kSbbsHeader = {"bike_id",  "user_id",  "start_time",
                                                          "start_station", "end_time", "end_station"};
constexpr std::array<std::string_view, 8> kDbsHeader = {"bike_id",  "company_id", "start_time", "start_lon",
                                                         "start_lat", "end_time",  "end_lon",    "end_lat"};

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

template <std::size_t N>
bool header_matches(const std::vector<std::string>& fields, std::size_t offset,
                    const std::array<std::string_view, N>& expected) {
  if (fields.size() != N + offset) return false;
  for (std::size_t i = 0; i < N; ++i) {
    if (trim(fields[i + offset]) != expected[i]) return false;
  }
  return true;
}

std::string strip_bom(std::string s) {
  if (s.size() >= 3 && static_cast<unsigned char>(s[0]) == 0xEF && static_cast<unsigned char>(s[1]) == 0xBB &&
      static_cast<unsigned char>(s[2]) == 0xBF) {
    s.erase(0, 3);
  }
  return s;
}

struct HeaderInfo {
  Schema schema;
  bool has_ids;
};

std::optional<HeaderInfo> classify_header(std::vector<std::string> fields) {
  if (!fields.empty()) fields[0] = strip_bom(fields[0]);
  const bool ids = !fields.empty() && trim(fields[0]) == "trip_id";
  const std::size_t off = ids ? 1 : 0;
  if (header_matches(fields, off, kSbbsHeader)) return HeaderInfo{Schema::sbbs, ids};
  if (header_matches(fields, off, kDbsHeader)) return HeaderInfo{Schema::dbs, ids};
  return std::nullopt;
}

std::optional<std::string> optional_text(const std::vector<std::string>& f, std::size_t i) {
  if (i >= f.size()) return std::nullopt;
  std::string s = trim(f[i]);
  if (s.empty()) return std::nullopt;
  return s;
}

std::optional<Timestamp> field_time(const std::vector<std::string>& f, std::size_t i) {
  if (i >= f.size()) return std::nullopt;
  return parse_timestamp(trim(f[i]));
}

std::optional<PlaceRef> field_station(const std::vector<std::string>& f, std::size_t i) {
  if (i >= f.size()) return std::nullopt;
  const auto id = csv::parse_int(f[i]);
  if (!id) return std::nullopt;
  return PlaceRef::station(*id);
}

std::optional<PlaceRef> field_point(const std::vector<std::string>& f, std::size_t lon_i, std::size_t lat_i) {
  if (lon_i >= f.size() || lat_i >= f.size()) return std::nullopt;
  const auto lon = csv::parse_double(f[lon_i]);
  const auto lat = csv::parse_double(f[lat_i]);
  if (!lon || !lat) return std::nullopt;
  return PlaceRef::coordinate(GeoPoint{*lat, *lon});
}

void classify_row(RawTrip& row, std::vector<Reject>& rejects, std::size_t expected_cols, std::size_t got_cols) {
  std::string detail;
  if (expected_cols != got_cols) {
    detail = "expected " + std::to_string(expected_cols) + " columns, got " + std::to_string(got_cols);
  }
  if (!row.start_time || !row.end_time) {
    rejects.push_back({row.row, RejectReason::missing_time, detail.empty() ? "start or end time absent" : detail});
  } else if (!row.origin || !row.destination) {
    rejects.push_back({row.row, RejectReason::missing_place, detail.empty() ? "origin or destination absent" : detail});
  }
}

std::string place_field(const PlaceRef& p, Schema schema) {
  if (schema == Schema::sbbs) return std::to_string(p.station_id());
  const GeoPoint g = p.point();
  return csv::format_shortest(g.lon) + "," + csv::format_shortest(g.lat);
}

}  // namespace

const char* to_string(Schema schema) { return schema == Schema::sbbs ? "sbbs" : "dbs"; }

std::optional<Schema> parse_schema(std::string_view text) {
  if (text == "sbbs" || text == "station") return Schema::sbbs;
  if (text == "dbs" || text == "dockless") return Schema::dbs;
  return std::nullopt;
}

const char* to_string(RejectReason reason) {
  return reason == RejectReason::missing_time ? "missing_time" : "missing_place";
}

Schema detect_schema(std::istream& in) {
  std::vector<std::string> fields;
  std::size_t line_no = 0;
  if (!csv::read_record(in, fields, line_no)) throw Error(ErrorKind::schema, "trip file has no header row");
  const auto info = classify_header(fields);
  if (!info) throw Error(ErrorKind::schema, "header matches neither the sbbs nor the dbs trip schema");
  return info->schema;
}

RawTripList parse_trips(std::istream& in, Schema schema) {
  std::vector<std::string> fields;
  std::size_t line_no = 0;
  if (!csv::read_record(in, fields, line_no)) throw Error(ErrorKind::schema, "trip file has no header row");
  const auto info = classify_header(fields);
  if (!info || info->schema != schema) {
    throw Error(ErrorKind::schema,
                std::string("header does not match the ") + to_string(schema) + " trip schema");
  }

  RawTripList out;
  out.schema = schema;
  out.has_source_ids = info->has_ids;
  const std::size_t off = info->has_ids ? 1 : 0;
  const std::size_t expected = (schema == Schema::sbbs ? kSbbsHeader.size() : kDbsHeader.size()) + off;
  std::set<TripId> seen_ids;

  while (csv::read_record(in, fields, line_no)) {
    RawTrip row;
    row.row = line_no;
    if (info->has_ids) {
      const auto id = fields.empty() ? std::nullopt : csv::parse_int(fields[0]);
      if (!id) throw Error(ErrorKind::data, "row " + std::to_string(line_no) + ": unreadable trip_id");
      if (!seen_ids.insert(*id).second) {
        throw Error(ErrorKind::data, "duplicate trip_id " + std::to_string(*id) + " at row " + std::to_string(line_no));
      }
      row.source_id = *id;
    }
    row.bike_id_source = optional_text(fields, off + 0);
    row.start_time = field_time(fields, off + 2);
    if (schema == Schema::sbbs) {
      row.user_id_source = optional_text(fields, off + 1);
      row.origin = field_station(fields, off + 3);
      row.end_time = field_time(fields, off + 4);
      row.destination = field_station(fields, off + 5);
    } else {
      if (const auto c = optional_text(fields, off + 1)) {
        if (const auto v = csv::parse_int(*c)) row.company_id = static_cast<int>(*v);
      }
      row.origin = field_point(fields, off + 3, off + 4);
      row.end_time = field_time(fields, off + 5);
      row.destination = field_point(fields, off + 6, off + 7);
    }
    classify_row(row, out.rejects, expected, fields.size());
    out.rows.push_back(std::move(row));
  }
  return out;
}

StationRegistry parse_station_registry(std::istream& in) {
  std::vector<std::string> fields;
  std::size_t line_no = 0;
  if (!csv::read_record(in, fields, line_no)) throw Error(ErrorKind::schema, "station registry has no header row");
  if (!fields.empty()) fields[0] = strip_bom(fields[0]);
  if (fields.size() != 4 || trim(fields[0]) != "station_id" || trim(fields[1]) != "station_name" ||
      trim(fields[2]) != "lat" || trim(fields[3]) != "lon") {
    throw Error(ErrorKind::schema, "station registry header must be station_id,station_name,lat,lon");
  }
  StationRegistry registry;
  while (csv::read_record(in, fields, line_no)) {
    const auto id = fields.size() == 4 ? csv::parse_int(fields[0]) : std::nullopt;
    const auto lat = fields.size() == 4 ? csv::parse_double(fields[2]) : std::nullopt;
    const auto lon = fields.size() == 4 ? csv::parse_double(fields[3]) : std::nullopt;
    if (!id || !lat || !lon) {
      throw Error(ErrorKind::schema, "station registry row " + std::to_string(line_no) + " is malformed");
    }
    if (registry.contains(*id)) {
      throw Error(ErrorKind::data, "duplicate station_id " + std::to_string(*id));
    }
    registry.emplace(*id, Station{*id, trim(fields[1]), GeoPoint{*lat, *lon}});
  }
  return registry;
}

void write_station_registry(std::ostream& out, const StationRegistry& registry) {
  out << "station_id,station_name,lat,lon\n";
  for (const auto& [id, st] : registry) {
    out << id << ',' << csv::escape(st.name) << ',' << csv::format_shortest(st.location.lat) << ','
        << csv::format_shortest(st.location.lon) << '\n';
  }
}

Bounds Bounds::parse(std::string_view text) {
  const auto parts = csv::split_record(text);
  if (parts.size() != 4) throw Error(ErrorKind::precondition, "bounds must be min_lat,min_lon,max_lat,max_lon");
  std::array<double, 4> v{};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto d = csv::parse_double(parts[i]);
    if (!d) throw Error(ErrorKind::precondition, "bounds value '" + parts[i] + "' is not a number");
    v[i] = *d;
  }
  Bounds b{v[0], v[1], v[2], v[3]};
  if (b.degenerate()) throw Error(ErrorKind::precondition, "bounds rectangle is degenerate");
  return b;
}

std::string Bounds::to_string() const {
  return csv::format_shortest(min_lat) + "," + csv::format_shortest(min_lon) + "," + csv::format_shortest(max_lat) +
         "," + csv::format_shortest(max_lon);
}

std::string CleaningReport::to_json() const {
  std::ostringstream os;
  os << "{\n"
     << "  \"total_rows\": " << total_rows << ",\n"
     << "  \"dropped_missing_time\": " << dropped_missing_time << ",\n"
     << "  \"dropped_missing_place\": " << dropped_missing_place << ",\n"
     << "  \"dropped_out_of_bounds\": " << dropped_out_of_bounds << ",\n"
     << "  \"dropped_inverted_time\": " << dropped_inverted_time << ",\n"
     << "  \"kept\": " << kept << ",\n"
     << "  \"empty_result\": " << (empty_result ? "true" : "false") << "\n"
     << "}\n";
  return os.str();
}

CleanResult clean_trips(const RawTripList& raw, const Bounds& bounds, const StationRegistry* registry) {
  if (bounds.degenerate()) throw Error(ErrorKind::precondition, "bounds rectangle is degenerate");

  CleaningReport report;
  report.total_rows = raw.rows.size();
  std::vector<Trip> kept;
  kept.reserve(raw.rows.size());

  auto resolvable = [&](const PlaceRef& p) {
    if (p.is_coordinate()) return true;
    return registry == nullptr || registry->contains(p.station_id());
  };
  auto inside = [&](const PlaceRef& p) {
    if (p.is_coordinate()) return bounds.contains(p.point());
    if (registry == nullptr) return true;
    return bounds.contains(registry->at(p.station_id()).location);
  };

  for (const RawTrip& row : raw.rows) {
    if (!row.start_time || !row.end_time) {
      ++report.dropped_missing_time;
      continue;
    }
    if (!row.origin || !row.destination || !resolvable(*row.origin) || !resolvable(*row.destination)) {
      ++report.dropped_missing_place;
      continue;
    }
    if (!inside(*row.origin) || !inside(*row.destination)) {
      ++report.dropped_out_of_bounds;
      continue;
    }
    if (*row.start_time > *row.end_time) {
      ++report.dropped_inverted_time;
      continue;
    }
    Trip t;
    t.id = row.source_id ? *row.source_id : static_cast<TripId>(kept.size());
    t.origin = *row.origin;
    t.destination = *row.destination;
    t.start_time = *row.start_time;
    t.end_time = *row.end_time;
    t.company_id = row.company_id;
    t.bike_id_source = row.bike_id_source;
    t.user_id_source = row.user_id_source;
    kept.push_back(std::move(t));
  }
  report.kept = kept.size();
  report.empty_result = kept.empty();
  return CleanResult{TripSet(std::move(kept)), report};
}

RawTripList to_raw(const TripSet& trips, Schema schema) {
  RawTripList out;
  out.schema = schema;
  out.has_source_ids = true;
  out.rows.reserve(trips.size());
  std::size_t row = 2;
  for (const Trip& t : trips.trips()) {
    RawTrip r;
    r.row = row++;
    r.source_id = t.id;
    r.start_time = t.start_time;
    r.end_time = t.end_time;
    r.origin = t.origin;
    r.destination = t.destination;
    r.company_id = t.company_id;
    r.bike_id_source = t.bike_id_source;
    r.user_id_source = t.user_id_source;
    out.rows.push_back(std::move(r));
  }
  return out;
}

std::map<CivilDate, TripSet> split_by_day(const TripSet& trips) {
  std::map<CivilDate, TripSet> out;
  for (const auto& [date, range] : trips.day_index()) {
    const auto day = trips.trips().subspan(range.begin, range.end - range.begin);
    out.emplace(date, TripSet(std::vector<Trip>(day.begin(), day.end())));
  }
  return out;
}

std::map<int, TripSet> split_by_company(const TripSet& trips) {
  std::map<int, std::vector<Trip>> buckets;
  for (const Trip& t : trips.trips()) {
    if (!t.company_id) throw Error(ErrorKind::data, "trip " + std::to_string(t.id) + " has no company_id");
    buckets[*t.company_id].push_back(t);
  }
  std::map<int, TripSet> out;
  for (auto& [company, list] : buckets) out.emplace(company, TripSet(std::move(list)));
  return out;
}

void write_trips_csv(std::ostream& out, const TripSet& trips, Schema schema) {
  if (schema == Schema::sbbs) {
    out << "trip_id,bike_id,user_id,start_time,start_station,end_time,end_station\n";
  } else {
    out << "trip_id,bike_id,company_id,start_time,start_lon,start_lat,end_time,end_lon,end_lat\n";
  }
  for (const Trip& t : trips.trips()) {
    out << t.id << ',' << csv::escape(t.bike_id_source.value_or("")) << ',';
    if (schema == Schema::sbbs) {
      out << csv::escape(t.user_id_source.value_or(""));
    } else if (t.company_id) {
      out << *t.company_id;
    }
    out << ',' << format_timestamp(t.start_time) << ',' << place_field(t.origin, schema) << ','
        << format_timestamp(t.end_time) << ',' << place_field(t.destination, schema) << '\n';
  }
}

CleanResult load_trips_file(const std::string& path, const Bounds& bounds, const StationRegistry* registry) {
  std::ifstream probe(path);
  if (!probe) throw Error(ErrorKind::io, "cannot open trip file: " + path);
  const Schema schema = detect_schema(probe);
  std::ifstream in(path);
  return clean_trips(parse_trips(in, schema), bounds, registry);
}

StationRegistry load_station_registry_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open station registry: " + path);
  return parse_station_registry(in);
}

}  // namespace bikefleet
