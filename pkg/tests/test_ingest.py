import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renewalstream.errors import (
    EmptyStreamError,
    InsufficientDataError,
    InvalidConfigError,
    ParseError,
)
from renewalstream.ingest import (
    EventStream,
    InterArrivals,
    downsample,
    inter_arrivals,
    parse_stream,
    serialize_stream,
)


class TestParseStream:
    def test_sorts_and_keeps_duplicates(self):
        stream = parse_stream("10\n12\n10\n")
        assert stream.times.tolist() == [10, 10, 12]
        assert stream.m == 3

    def test_iso_lines_become_epoch_seconds(self):
        stream = parse_stream("2011-07-01T00:00:00\n2011-07-01T00:00:05\n")
        assert stream.times.tolist() == [1309478400, 1309478405]

    def test_malformed_line_reports_line_number(self):
        with pytest.raises(ParseError, match="line 1"):
            parse_stream("abc\n")

    def test_error_line_number_skips_nothing(self):
        with pytest.raises(ParseError, match="line 3"):
            parse_stream("10\n# comment\noops\n")

    def test_empty_input_rejected(self):
        with pytest.raises(EmptyStreamError):
            parse_stream("")
        with pytest.raises(EmptyStreamError):
            parse_stream("# only a comment\n\n")

    def test_comments_and_blank_lines_skipped(self):
        stream = parse_stream("# header\n5\n\n7\n")
        assert stream.times.tolist() == [5, 7]

    def test_subsecond_inputs_rejected(self):
        with pytest.raises(ParseError):
            parse_stream("10.5\n")
        with pytest.raises(ParseError):
            parse_stream("2011-07-01T00:00:00.5\n")

    def test_invalid_calendar_date_rejected(self):
        with pytest.raises(ParseError):
            parse_stream("2011-13-01T00:00:00\n")

    @given(st.lists(st.integers(min_value=0, max_value=10**9), min_size=1, max_size=50))
    def test_roundtrip_through_serialization(self, times):
        stream = EventStream(np.sort(np.asarray(times, dtype=np.int64)))
        again = parse_stream(serialize_stream(stream))
        assert again.times.tolist() == stream.times.tolist()

    def test_serialization_is_bit_exact_for_epoch_input(self):
        text = "3\n5\n10\n"
        assert serialize_stream(parse_stream(text)) == text


class TestEventStream:
    def test_rate(self):
        stream = EventStream(np.asarray([0, 5, 10]))
        assert stream.rate == pytest.approx(2 / 10)

    def test_rate_needs_two_events(self):
        with pytest.raises(InsufficientDataError):
            EventStream(np.asarray([3])).rate

    def test_rate_undefined_for_zero_span(self):
        with pytest.raises(InsufficientDataError):
            EventStream(np.asarray([3, 3, 3])).rate


class TestInterArrivals:
    def test_zeros_preserved(self):
        stream = EventStream(np.asarray([10, 10, 12]))
        assert inter_arrivals(stream).values.tolist() == [0, 2]

    def test_constant_gaps(self):
        stream = EventStream(np.asarray([0, 5, 10, 15]))
        assert inter_arrivals(stream).values.tolist() == [5, 5, 5]

    def test_single_event_rejected(self):
        with pytest.raises(InsufficientDataError):
            inter_arrivals(EventStream(np.asarray([1])))

    @given(
        st.lists(st.integers(min_value=0, max_value=10**6), min_size=2, max_size=100)
    )
    def test_telescoping_sum_and_shape(self, times):
        stream = EventStream(np.sort(np.asarray(times, dtype=np.int64)))
        arrivals = inter_arrivals(stream)
        assert arrivals.n == stream.m - 1
        assert np.all(arrivals.values >= 0)
        assert arrivals.total == stream.times[-1] - stream.times[0]


class TestDownsample:
    def test_forced_grouping(self):
        grouped = downsample(InterArrivals([1, 2, 3, 4]), 2, 2, seed=0)
        assert grouped.values.tolist() == [3, 7]

    def test_whole_sequence_as_one_group(self):
        grouped = downsample(InterArrivals([1, 2, 3]), 3, 3, seed=0)
        assert grouped.values.tolist() == [6]

    def test_unit_groups_are_identity(self):
        grouped = downsample(InterArrivals([4, 0, 7]), 1, 1, seed=5)
        assert grouped.values.tolist() == [4, 0, 7]

    def test_invalid_ranges_rejected(self):
        with pytest.raises(InvalidConfigError):
            downsample(InterArrivals([1]), 0, 2, seed=0)
        with pytest.raises(InvalidConfigError):
            downsample(InterArrivals([1]), 3, 2, seed=0)

    def test_empty_input_rejected(self):
        with pytest.raises(InsufficientDataError):
            downsample(InterArrivals([]), 1, 2, seed=0)

    def test_deterministic_under_seed(self):
        arrivals = InterArrivals(np.arange(40))
        a = downsample(arrivals, 1, 5, seed=9)
        b = downsample(arrivals, 1, 5, seed=9)
        assert a.values.tolist() == b.values.tolist()

    @settings(max_examples=200)
    @given(
        values=st.lists(
            st.integers(min_value=0, max_value=10**6), min_size=1, max_size=200
        ),
        lo=st.integers(min_value=1, max_value=8),
        extra=st.integers(min_value=0, max_value=8),
        seed=st.integers(min_value=0, max_value=2**31),
    )
    def test_sum_preserved_for_every_seed_and_range(self, values, lo, extra, seed):
        arrivals = InterArrivals(values)
        grouped = downsample(arrivals, lo, lo + extra, seed=seed)
        assert grouped.total == arrivals.total
        assert 1 <= grouped.n <= arrivals.n
