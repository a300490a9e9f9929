import numpy as np
import pytest

from pxfes.parallel import chunk_spans, run_chunks, thread_count


class TestThreadCount:
    def test_explicit_request_wins(self, monkeypatch):
        monkeypatch.setenv("PXFES_THREADS", "3")
        assert thread_count(5) == 5

    def test_env_var_used(self, monkeypatch):
        monkeypatch.setenv("PXFES_THREADS", "3")
        assert thread_count() == 3

    def test_default_without_env(self, monkeypatch):
        monkeypatch.delenv("PXFES_THREADS", raising=False)
        assert thread_count() >= 1

    @pytest.mark.parametrize("bad", ["0", "-2", "two", ""])
    def test_invalid_env_rejected(self, monkeypatch, bad):
        monkeypatch.setenv("PXFES_THREADS", bad)
        with pytest.raises(ValueError):
            thread_count()

    def test_invalid_explicit_rejected(self):
        with pytest.raises(ValueError):
            thread_count(0)


class TestChunks:
    def test_spans_cover_range(self):
        spans = chunk_spans(10, 4)
        assert spans == [(0, 4), (4, 8), (8, 10)]

    def test_single_span(self):
        assert chunk_spans(3, 100) == [(0, 3)]

    def test_bad_chunk_size(self):
        with pytest.raises(ValueError):
            chunk_spans(3, 0)

    @pytest.mark.parametrize("threads", [1, 2, 4])
    def test_run_chunks_fills_every_slot(self, threads):
        out = np.zeros(23)

        def worker(start, stop):
            out[start:stop] = np.arange(start, stop)

        run_chunks(chunk_spans(23, 5), worker, threads)
        np.testing.assert_array_equal(out, np.arange(23))

    def test_worker_exception_propagates(self):
        def worker(start, stop):
            raise RuntimeError("boom")

        with pytest.raises(RuntimeError, match="boom"):
            run_chunks(chunk_spans(8, 2), worker, threads=2)
