"""Slot and intent inventories for the two slot-filling benchmarks.

These are the raw label sets the naturalization rules must stay bijective
over. SNIPS keeps its per-domain slot lists because leave-one-out episode
sampling works domain by domain; for ATIS only the distinct slot union
matters here.
"""

SNIPS_DOMAIN_SLOTS: dict[str, tuple[str, ...]] = {
    "GetWeather": (
        "timeRange",
        "condition_description",
        "country",
        "geographic_poi",
        "city",
        "state",
        "current_location",
        "condition_temperature",
        "spatial_relation",
    ),
    "PlayMusic": (
        "genre",
        "year",
        "album",
        "music_item",
        "playlist",
        "service",
        "sort",
        "artist",
        "track",
    ),
    "AddToPlaylist": (
        "entity_name",
        "music_item",
        "playlist",
        "playlist_owner",
        "artist",
    ),
    "RateBook": (
        "object_type",
        "object_part_of_series_type",
        "object_select",
        "rating_value",
        "object_name",
        "best_rating",
        "rating_unit",
    ),
    "SearchScreeningEvent": (
        "timeRange",
        "object_location_type",
        "object_type",
        "location_name",
        "movie_name",
        "spatial_relation",
        "movie_type",
    ),
    "BookRestaurant": (
        "party_size_number",
        "served_dish",
        "timeRange",
        "country",
        "poi",
        "cuisine",
        "spatial_relation",
        "city",
        "restaurant_name",
        "sort",
        "restaurant_type",
        "facility",
        "party_size_description",
        "state",
    ),
    "SearchCreativeWork": (
        "object_type",
        "object_name",
    ),
}

SNIPS_INTENTS: tuple[str, ...] = tuple(SNIPS_DOMAIN_SLOTS)

# Two-letter domain ids used by the leave-one-out convention.
SNIPS_DOMAIN_IDS: dict[str, str] = {
    "GetWeather": "We",
    "PlayMusic": "Mu",
    "AddToPlaylist": "Pl",
    "RateBook": "Bo",
    "SearchScreeningEvent": "Se",
    "BookRestaurant": "Re",
    "SearchCreativeWork": "Cr",
}

SNIPS_SLOTS: frozenset[str] = frozenset(
    slot for slots in SNIPS_DOMAIN_SLOTS.values() for slot in slots
)

ATIS_SLOTS: frozenset[str] = frozenset(
    {
        "aircraft_code",
        "airline_code",
        "airline_name",
        "airport_code",
        "airport_name",
        "arrive_date.date_relative",
        "arrive_date.day_name",
        "arrive_date.day_number",
        "arrive_date.month_name",
        "arrive_date.today_relative",
        "arrive_time.end_time",
        "arrive_time.period_mod",
        "arrive_time.period_of_day",
        "arrive_time.start_time",
        "arrive_time.time",
        "arrive_time.time_relative",
        "booking_class",
        "city_name",
        "class_type",
        "compartment",
        "connect",
        "cost_relative",
        "day_name",
        "day_number",
        "days_code",
        "depart_date.date_relative",
        "depart_date.day_name",
        "depart_date.day_number",
        "depart_date.month_name",
        "depart_date.today_relative",
        "depart_date.year",
        "depart_time.end_time",
        "depart_time.period_mod",
        "depart_time.period_of_day",
        "depart_time.start_time",
        "depart_time.time",
        "depart_time.time_relative",
        "economy",
        "fare_amount",
        "fare_basis_code",
        "flight",
        "flight_days",
        "flight_mod",
        "flight_number",
        "flight_stop",
        "flight_time",
        "fromloc.airport_code",
        "fromloc.airport_name",
        "fromloc.city_name",
        "fromloc.state_code",
        "fromloc.state_name",
        "meal",
        "meal_code",
        "meal_description",
        "mod",
        "month_name",
        "or",
        "period_of_day",
        "restriction_code",
        "return_date.date_relative",
        "return_date.day_name",
        "return_date.day_number",
        "return_date.month_name",
        "return_date.today_relative",
        "return_time.period_mod",
        "return_time.period_of_day",
        "round_trip",
        "state_code",
        "state_name",
        "stoploc.airport_code",
        "stoploc.airport_name",
        "stoploc.city_name",
        "stoploc.state_code",
        "time",
        "time_relative",
        "today_relative",
        "toloc.airport_code",
        "toloc.airport_name",
        "toloc.city_name",
        "toloc.country_name",
        "toloc.state_code",
        "toloc.state_name",
        "transport_type",
    }
)
