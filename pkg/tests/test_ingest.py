"""File format coverage: profiles, tournaments, and chart-style rankings."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beatpath.core import majority_margins
from beatpath.generators import mcgarvey_profile, random_profile, random_tournament
from beatpath.ingest import (
    ChartRecord,
    ParseError,
    default_labels,
    parse_profile,
    parse_tournament,
    profile_from_charts,
    read_chart_csv,
    write_profile,
    write_tournament,
)


class TestParseProfile:
    def test_strict_and_tied_ballots(self):
        profile, labels = parse_profile(
            "candidates: a, b, c\n"
            "a>b>c\n"
            "a>b=c\n"
        )
        assert labels == ("a", "b", "c")
        assert profile.voters[0].tiers == ((0,), (1,), (2,))
        assert profile.voters[1].tiers == ((0,), (1, 2))
        assert profile.weights == (1, 1)

    def test_multiplicity_prefix(self):
        profile, _ = parse_profile("candidates: a, b\n3: a>b\n")
        assert profile.weights == (3,)
        mu = majority_margins(profile)
        assert mu[0, 1] == 3

    def test_unlisted_candidates_fill_bottom_tier(self):
        profile, _ = parse_profile("candidates: a, b, c\nb\n")
        assert profile.voters[0].tiers == ((1,), (0, 2))

    def test_comments_blanks_and_crlf(self):
        profile, _ = parse_profile(
            "# preamble\r\n"
            "candidates: a, b  # two candidates\r\n"
            "\r\n"
            "a>b  # a wins\r\n"
        )
        assert profile.m == 2 and len(profile.voters) == 1

    def test_missing_header(self):
        with pytest.raises(ParseError, match="candidates"):
            parse_profile("a>b\n")
        with pytest.raises(ParseError, match="header"):
            parse_profile("")

    def test_unknown_label_reports_line(self):
        with pytest.raises(ParseError, match="line 3.*'z'"):
            parse_profile("candidates: a, b\na>b\nz>a\n")

    def test_duplicate_listing_rejected(self):
        with pytest.raises(ParseError, match="twice"):
            parse_profile("candidates: a, b\na>a\n")

    def test_malformed_tier(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_profile("candidates: a, b\na>\n")

    def test_bad_header_labels(self):
        with pytest.raises(ParseError, match="duplicate"):
            parse_profile("candidates: a, a\n")
        with pytest.raises(ParseError, match="empty"):
            parse_profile("candidates: a, , b\n")

    def test_nonpositive_multiplicity(self):
        with pytest.raises(ParseError, match="positive"):
            parse_profile("candidates: a, b\n0: a>b\n")


class TestWriteProfile:
    def test_round_trips_a_generated_profile(self, sample4):
        profile = mcgarvey_profile(sample4)
        text = write_profile(profile)
        parsed, labels = parse_profile(text)
        assert labels == default_labels(4)
        assert parsed.m == profile.m
        assert parsed.weights == profile.weights
        assert [v.tiers for v in parsed.voters] == [v.tiers for v in profile.voters]

    def test_weight_prefix_only_when_needed(self):
        profile, _ = parse_profile("candidates: a, b\n2: a>b\nb>a\n")
        text = write_profile(profile, ("a", "b"))
        assert text.splitlines()[1:] == ["2: a > b", "b > a"]

    def test_rejects_unwritable_labels(self, sample4):
        profile = mcgarvey_profile(sample4)
        for bad in ("x,y", "x>y", "x=y", "#x", "x:", " x"):
            with pytest.raises(ValueError, match="writable"):
                write_profile(profile, (bad, "b", "c", "d"))

    def test_label_count_must_match(self, sample4):
        profile = mcgarvey_profile(sample4)
        with pytest.raises(ValueError, match="label per candidate"):
            write_profile(profile, ("a", "b"))

    @given(st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_random_profiles_round_trip(self, seed):
        rng = np.random.default_rng(seed)
        profile = random_profile(int(rng.integers(1, 8)), int(rng.integers(1, 12)), seed)
        parsed, _ = parse_profile(write_profile(profile))
        assert parsed.weights == profile.weights
        assert [v.tiers for v in parsed.voters] == [v.tiers for v in profile.voters]


class TestTournamentFormat:
    def test_parses_sample4(self, sample4):
        text = (
            "m 4\n"
            "0,1,4\n0,2,6\n1,2,10\n2,3,8\n3,0,2\n3,1,12\n"
        )
        t = parse_tournament(text)
        assert t.m == 4
        assert t.edge_dict() == sample4.edge_dict()

    def test_single_candidate_no_edges(self):
        t = parse_tournament("m 1\n")
        assert t.m == 1 and t.edge_count == 0

    def test_write_then_parse_is_identity(self, sample4):
        t = parse_tournament(write_tournament(sample4))
        assert t.edge_dict() == sample4.edge_dict()
        # Canonical edge order makes the round trip bit-exact.
        assert write_tournament(t) == write_tournament(sample4)

    @given(st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_random_round_trips(self, seed):
        rng = np.random.default_rng(seed)
        t = random_tournament(int(rng.integers(1, 30)), float(rng.uniform(0.1, 1)), 50, seed)
        assert parse_tournament(write_tournament(t)).edge_dict() == t.edge_dict()

    def test_header_errors(self):
        with pytest.raises(ParseError, match="header"):
            parse_tournament("")
        with pytest.raises(ParseError, match="m <count>"):
            parse_tournament("candidates 4\n")

    def test_edge_line_errors(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_tournament("m 3\n0,1\n")
        with pytest.raises(ParseError, match="integers"):
            parse_tournament("m 3\n0,one,4\n")
        with pytest.raises(ParseError, match="positive"):
            parse_tournament("m 3\n0,1,0\n")

    def test_malformed_tournaments_rejected(self):
        with pytest.raises(ParseError):
            parse_tournament("m 3\n0,1,4\n0,1,6\n")  # duplicate pair
        with pytest.raises(ParseError):
            parse_tournament("m 3\n0,1,4\n1,0,6\n")  # both directions
        with pytest.raises(ParseError):
            parse_tournament("m 3\n0,3,4\n")  # id out of range


class TestCharts:
    def test_single_truncated_ballot(self):
        records = [ChartRecord("g", 1, "x"), ChartRecord("g", 2, "y")]
        profile, labels = profile_from_charts(records, universe=["x", "y", "z"])
        assert labels == ("x", "y", "z")
        assert len(profile.voters) == 1
        assert profile.voters[0].tiers == ((0,), (1,), (2,))

    def test_reversed_pairs_cancel(self):
        records = [
            ChartRecord("g1", 1, "a"), ChartRecord("g1", 2, "b"),
            ChartRecord("g2", 1, "b"), ChartRecord("g2", 2, "a"),
        ]
        profile, _ = profile_from_charts(records)
        assert not majority_margins(profile).mu.any()

    def test_three_groups_match_pairwise_counting(self):
        listing = {
            "g1": ["e", "b", "a"],
            "g2": ["c", "a"],
            "g3": ["d", "c", "b", "e"],
        }
        records = [
            ChartRecord(g, i + 1, item)
            for g, items in listing.items()
            for i, item in enumerate(items)
        ]
        profile, labels = profile_from_charts(records)
        assert labels == ("a", "b", "c", "d", "e")

        # Independent count: listed items beat later-listed and unlisted ones.
        index = {lab: i for i, lab in enumerate(labels)}
        expected = np.zeros((5, 5), dtype=np.int64)
        for items in listing.values():
            pos = {index[lab]: r for r, lab in enumerate(items)}
            for a in range(5):
                for b in range(5):
                    if a == b:
                        continue
                    ra = pos.get(a, len(items))
                    rb = pos.get(b, len(items))
                    if ra < rb:
                        expected[a, b] += 1
                        expected[b, a] -= 1
        assert np.array_equal(majority_margins(profile).mu, expected)

    def test_duplicate_rank_rejected(self):
        records = [ChartRecord("g", 1, "x"), ChartRecord("g", 1, "y")]
        with pytest.raises(ValueError, match="repeats a rank"):
            profile_from_charts(records)

    def test_items_outside_universe_rejected(self):
        with pytest.raises(ValueError, match="universe"):
            profile_from_charts([ChartRecord("g", 1, "q")], universe=["x"])

    def test_ballots_are_complete_weak_orders(self):
        records = [
            ChartRecord("g1", 1, "a"),
            ChartRecord("g2", 1, "b"), ChartRecord("g2", 2, "c"),
        ]
        profile, _ = profile_from_charts(records)
        for voter in profile.voters:
            assert sorted(c for tier in voter.tiers for c in tier) == [0, 1, 2]


class TestChartCsv:
    CSV = (
        "date,region,rank,item\n"
        "d1,us,1,x\n"
        "d1,us,2,y\n"
        "d1,se,1,y\n"
    )

    def test_reads_and_groups(self):
        records = read_chart_csv(self.CSV, ["date", "region"], "rank", "item")
        assert records == [
            ChartRecord("d1|us", 1, "x"),
            ChartRecord("d1|us", 2, "y"),
            ChartRecord("d1|se", 1, "y"),
        ]

    def test_feeds_profile_builder(self):
        records = read_chart_csv(self.CSV, ["date", "region"], "rank", "item")
        profile, labels = profile_from_charts(records)
        assert labels == ("x", "y")
        assert len(profile.voters) == 2

    def test_missing_columns(self):
        with pytest.raises(ParseError, match="missing columns: chart"):
            read_chart_csv(self.CSV, ["chart"], "rank", "item")

    def test_bad_rank(self):
        bad = "rank,item,g\nfirst,x,a\n"
        with pytest.raises(ParseError, match="line 2.*integer"):
            read_chart_csv(bad, ["g"], "rank", "item")
        bad = "rank,item,g\n0,x,a\n"
        with pytest.raises(ParseError, match="positive"):
            read_chart_csv(bad, ["g"], "rank", "item")

    def test_empty_csv(self):
        with pytest.raises(ParseError, match="empty"):
            read_chart_csv("", ["g"], "rank", "item")
