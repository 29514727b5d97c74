#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bikefleet/trip.hpp"

namespace bikefleet {

/// SBBS: bike_id,user_id,start_time,start_station,end_time,end_station
/// DBS:  bike_id,company_id,start_time,start_lon,start_lat,end_time,end_lon,end_lat
/// Either header may be prefixed with a trip_id column (as written by
/// write_trips_csv); ids are then taken from the file instead of assigned.
enum class Schema { sbbs, dbs };

const char* to_string(Schema schema);
std::optional<Schema> parse_schema(std::string_view text);

enum class RejectReason { missing_time, missing_place };

const char* to_string(RejectReason reason);

struct RawTrip {
  std::size_t row = 0;  // 1-based line number in the source
  std::optional<TripId> source_id;
  std::optional<Timestamp> start_time;
  std::optional<Timestamp> end_time;
  std::optional<PlaceRef> origin;
  std::optional<PlaceRef> destination;
  std::optional<int> company_id;
  std::optional<std::string> bike_id_source;
  std::optional<std::string> user_id_source;
};

struct Reject {
  std::size_t row = 0;
  RejectReason reason = RejectReason::missing_time;
  std::string detail;
};

struct RawTripList {
  Schema schema = Schema::sbbs;
  bool has_source_ids = false;
  std::vector<RawTrip> rows;
  std::vector<Reject> rejects;
};

/// Parses a trip CSV. Malformed rows stay in `rows` (with the unusable fields
/// empty) and are also listed in `rejects`.
///
/// Throws Error(schema) for a header that does not match `schema`, and
/// Error(data) for duplicate trip ids when the file carries them.
RawTripList parse_trips(std::istream& in, Schema schema);

/// Reads only the header line to decide which schema a file uses.
Schema detect_schema(std::istream& in);

struct Station {
  StationId id = 0;
  std::string name;
  GeoPoint location;
};

/// station_id,station_name,lat,lon
using StationRegistry = std::map<StationId, Station>;

StationRegistry parse_station_registry(std::istream& in);
void write_station_registry(std::ostream& out, const StationRegistry& registry);

struct Bounds {
  double min_lat = -90.0;
  double min_lon = -180.0;
  double max_lat = 90.0;
  double max_lon = 180.0;

  static Bounds world() { return {}; }
  /// "min_lat,min_lon,max_lat,max_lon"
  static Bounds parse(std::string_view text);

  bool contains(GeoPoint p) const {
    return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon && p.lon <= max_lon;
  }
  bool degenerate() const { return !(min_lat < max_lat && min_lon < max_lon); }
  std::string to_string() const;
};

struct CleaningReport {
  std::size_t total_rows = 0;
  std::size_t dropped_missing_time = 0;
  std::size_t dropped_missing_place = 0;
  std::size_t dropped_out_of_bounds = 0;
  std::size_t dropped_inverted_time = 0;
  std::size_t kept = 0;
  bool empty_result = false;

  bool reconciles() const {
    return kept + dropped_missing_time + dropped_missing_place + dropped_out_of_bounds +
               dropped_inverted_time ==
           total_rows;
  }
  std::string to_json() const;
};

struct CleanResult {
  TripSet trips;
  CleaningReport report;
};

/// Applies, in order: (a) both times present, (b) both places present and
/// resolvable, (c) both places inside `bounds`, (d) start_time <= end_time.
/// Station places are resolved through `registry` when one is given; without
/// a registry, station trips skip the bounds rule.
///
/// Trip ids are the 0-based ordinal among kept rows unless the source carried ids.
CleanResult clean_trips(const RawTripList& raw, const Bounds& bounds,
                        const StationRegistry* registry = nullptr);

/// Turns a clean TripSet back into raw rows (row numbers are ordinals + 2).
RawTripList to_raw(const TripSet& trips, Schema schema);

std::map<CivilDate, TripSet> split_by_day(const TripSet& trips);

/// Throws Error(data) naming the first trip without a company id.
std::map<int, TripSet> split_by_company(const TripSet& trips);

/// Writes trips in `schema` with a leading trip_id column.
void write_trips_csv(std::ostream& out, const TripSet& trips, Schema schema);

/// parse_trips + clean_trips on a file. Schema is detected from the header.
CleanResult load_trips_file(const std::string& path, const Bounds& bounds,
                            const StationRegistry* registry = nullptr);

StationRegistry load_station_registry_file(const std::string& path);

}  // namespace bikefleet
