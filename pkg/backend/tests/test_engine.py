"""
Tests for the detection engine: laminar-splitting search, certificates,
the pipeline verdict and its renderings.

Run with: pytest backend/tests/test_engine.py -v
"""

import orjson
import pytest

import services.branched.queries as queries_module
import services.engine.pipeline as pipeline_module
from core.config import override_settings
from services.branched import DiskSelection, from_disk_types
from services.engine import (
    FOUND,
    INCONCLUSIVE,
    LAMINAR_CERTIFIED,
    NO_CANDIDATE_CARRIES,
    NOT_FOUND,
    CandidateRecord,
    CertificateError,
    EnginePreconditionError,
    Lamalg1Search,
    Verdict,
    certificate_from_json,
    certificate_to_json,
    detect,
    lamalg1_bounded,
    load_certificate,
    render_text,
    save_certificate,
    verdict_to_json,
    verify_certificate,
)
from services.engine.certificates import triangulation_digest
from services.engine.pipeline import (
    CAVEAT_INCOMPRESSIBILITY,
    CAVEAT_NOT_ONE_EFFICIENT,
    CAVEAT_ONE_EFFICIENT,
    STATUS_BUDGET,
    STATUS_CLOSED,
    STATUS_EXHAUSTED,
    STATUS_FOUND,
    STATUS_SPHERE,
    _aggregate,
)
from services.splitting import SplittingComplex, parse_complex, serialize_complex

CONTACT = SplittingComplex(counts=(1, 0, 0), pins=(((0, 0, 0), 0),), pinned=(0,))


@pytest.fixture
def sink_certificate(sink_disk_surface):
    return lamalg1_bounded(sink_disk_surface, budget=1).certificate


# quad 4 in one tetrahedron, quad 5 in the other: no sink disks, no bubbles
MIXED_QUADS = DiskSelection.of([[0, 1, 2, 3, 4], [0, 1, 2, 3, 5]])


@pytest.fixture
def spheres_hidden(mocker):
    """The doubled tetrahedron carries its vertex links everywhere; hide them from the filter."""
    return mocker.patch("services.branched.queries.closed_surface_evidence", return_value=[])


@pytest.fixture
def mixed_certificate(doubled_tetrahedron, spheres_hidden):
    surface = from_disk_types(doubled_tetrahedron, MIXED_QUADS).with_flags(filter_passed=True)
    outcome = Lamalg1Search(surface, doubled_tetrahedron, MIXED_QUADS).step()
    assert outcome.found
    return outcome.certificate


def _maximal_evidence_only(real):
    def evidence(surface):
        if sum(len(block) for block in surface.embedding.selection) == 10:
            return real(surface)
        return []
    return evidence


def _record(status: str) -> CandidateRecord:
    return CandidateRecord(candidate_id="c0", selection="0:0,1;1:2", status=status)


class TestLaminarSplittingSearch:

    def test_laminar_surface_found_at_stage_zero(self, no_sink_surface):
        outcome = lamalg1_bounded(no_sink_surface, budget=2)
        assert outcome.status == FOUND
        assert outcome.n == 0
        assert outcome.certificate.complex == serialize_complex(SplittingComplex(counts=(0, 0, 0)))

    def test_sink_disk_needs_one_cell(self, sink_disk_surface):
        search = Lamalg1Search(sink_disk_surface)
        assert search.step().status == NOT_FOUND
        outcome = search.step()
        assert outcome.found
        assert outcome.n == 1
        assert outcome.certificate.complex == serialize_complex(CONTACT)
        assert outcome.certificate.transcript.sink_disks == ()

    def test_budget_zero_stops_after_identity(self, sink_disk_surface):
        outcome = lamalg1_bounded(sink_disk_surface, budget=0)
        assert outcome.status == NOT_FOUND
        assert outcome.n == 0

    def test_unfiltered_surface_is_refused(self, torus_surface):
        with pytest.raises(EnginePreconditionError):
            Lamalg1Search(torus_surface)

    def test_negative_budget(self, sink_disk_surface):
        with pytest.raises(EnginePreconditionError):
            lamalg1_bounded(sink_disk_surface, budget=-1)

    def test_budget_counts_cells(self, sink_disk_surface):
        outcome = lamalg1_bounded(sink_disk_surface, budget=1)
        assert outcome.found
        assert outcome.n == 1
        assert parse_complex(outcome.certificate.complex).cells == 1

    def test_found_search_keeps_its_outcome(self, no_sink_surface):
        search = Lamalg1Search(no_sink_surface)
        first = search.step()
        assert search.finished
        assert search.step() == first


class TestCertificates:

    def test_json_round_trip(self, sink_certificate):
        assert certificate_from_json(certificate_to_json(sink_certificate)) == sink_certificate

    def test_json_is_deterministic(self, sink_certificate):
        data = orjson.loads(certificate_to_json(sink_certificate))
        assert list(data) == sorted(data)
        assert data["encoding"] == "splitting-complex"

    def test_file_round_trip(self, sink_certificate, tmp_path):
        path = tmp_path / "cert.json"
        save_certificate(sink_certificate, path)
        assert load_certificate(path) == sink_certificate

    def test_malformed_json(self):
        with pytest.raises(CertificateError):
            certificate_from_json(b"{not json")
        with pytest.raises(CertificateError):
            certificate_from_json(b'{"version": "cert1"}')

    def test_missing_file(self, tmp_path):
        with pytest.raises(CertificateError):
            load_certificate(tmp_path / "absent.json")

    def test_wrong_version_fails_first(self, sink_certificate, doubled_tetrahedron):
        check = verify_certificate(doubled_tetrahedron, sink_certificate.model_copy(update={"version": "cert0"}))
        assert not check
        assert check.failed_step == "version"

    def test_foreign_triangulation(self, sink_certificate, doubled_tetrahedron):
        check = verify_certificate(doubled_tetrahedron, sink_certificate)
        assert check.failed_step == "selection admissible"

    def test_bad_selection(self, sink_certificate, doubled_tetrahedron):
        forged = sink_certificate.model_copy(update={
            "triangulation_digest": triangulation_digest(doubled_tetrahedron),
            "selection": "0:4,5;1:0",
        })
        assert verify_certificate(doubled_tetrahedron, forged).failed_step == "selection admissible"

    def test_candidate_certificate_replays(self, doubled_tetrahedron, mixed_certificate):
        assert mixed_certificate.selection == "0:0,1,2,3,4;1:0,1,2,3,5"
        assert parse_complex(mixed_certificate.complex).cells == 0
        assert verify_certificate(doubled_tetrahedron, mixed_certificate)

    @pytest.mark.parametrize(
        "field, value, step",
        [
            ("version", "cert0", "version"),
            ("encoding", "subdivided-complex", "version"),
            ("triangulation_digest", "0" * 64, "selection admissible"),
            ("selection", "0:4,5;1:0", "selection admissible"),
            ("eliminations", ("sc0\ncounts 1 0 0\n",), "elimination 0 valid"),
            ("complex", "sc0\ncounts 1 0 0\n", "c valid"),
        ],
    )
    def test_single_field_tampering(self, doubled_tetrahedron, mixed_certificate, field, value, step):
        forged = mixed_certificate.model_copy(update={field: value})
        check = verify_certificate(doubled_tetrahedron, forged)
        assert not check
        assert check.failed_step == step

    @pytest.mark.parametrize("update", [{"sink_disks": (0,)}, {"polygons": 99}, {"origin": "forged"}])
    def test_transcript_tampering(self, doubled_tetrahedron, mixed_certificate, update):
        forged = mixed_certificate.model_copy(update={"transcript": mixed_certificate.transcript.model_copy(update=update)})
        assert verify_certificate(doubled_tetrahedron, forged).failed_step == "laminar transcript"


class TestAggregate:

    def test_certificate_wins(self, sink_certificate):
        assert _aggregate([_record(STATUS_BUDGET)], [sink_certificate]) == LAMINAR_CERTIFIED

    @pytest.mark.parametrize("status", [STATUS_BUDGET, STATUS_CLOSED])
    def test_open_candidates_are_inconclusive(self, status):
        assert _aggregate([_record(STATUS_EXHAUSTED), _record(status)], []) == INCONCLUSIVE

    def test_all_exhausted(self):
        assert _aggregate([_record(STATUS_EXHAUSTED)], []) == NO_CANDIDATE_CARRIES
        assert _aggregate([], []) == NO_CANDIDATE_CARRIES


class TestDetect:

    def test_ball_is_refused(self, ball):
        with pytest.raises(EnginePreconditionError, match="closed orientable"):
            detect(ball)

    def test_no_candidates(self, doubled_tetrahedron, mocker):
        mocker.patch("services.engine.pipeline.candidates", return_value=[])
        verdict = detect(doubled_tetrahedron, assert_one_efficient=True)
        assert verdict.outcome == NO_CANDIDATE_CARRIES
        assert verdict.per_candidate == ()
        assert verdict.certificate is None
        assert CAVEAT_ONE_EFFICIENT in verdict.caveats

    def test_small_budget_run(self, doubled_tetrahedron):
        config = override_settings(default_budget=1, doc_rounds=1, max_candidates=4, max_complexes_per_stage=500)
        verdict = detect(doubled_tetrahedron, config)
        # every closed sub-selection of the doubled tetrahedron still carries a sphere
        assert verdict.outcome == NO_CANDIDATE_CARRIES
        assert verdict.certificate is None
        assert [r.candidate_id for r in verdict.per_candidate] == ["c0", "c1"]
        assert all(r.status == STATUS_SPHERE for r in verdict.per_candidate)
        assert all(
            any(line.startswith("sub-branched surfaces examined") for line in r.evidence)
            for r in verdict.per_candidate
        )
        assert verdict.schema_version == config.report_schema_version
        assert CAVEAT_INCOMPRESSIBILITY in verdict.caveats
        assert CAVEAT_NOT_ONE_EFFICIENT in verdict.caveats
        assert len(verdict.caveats) == len(set(verdict.caveats))
        assert verdict.normal_tori == 0
        ids = [r.candidate_id for r in verdict.per_candidate]
        assert len(ids) == len(set(ids))

    def test_sub_branched_surface_reaches_tandem(self, doubled_tetrahedron, mocker):
        # spheres are reported for maximal selections only, so the link-free
        # sub-selections of the first candidate survive the filter
        evidence = _maximal_evidence_only(queries_module.closed_surface_evidence)
        mocker.patch("services.branched.queries.closed_surface_evidence", side_effect=evidence)
        mocker.patch("services.engine.pipeline.closed_surface_evidence", side_effect=evidence)
        mocker.patch("services.engine.pipeline.disks_of_contact", return_value=[])
        tandem = mocker.spy(pipeline_module, "_tandem")
        config = override_settings(default_budget=1, max_candidates=1, max_complexes_per_stage=200, max_annulus_branches=0)

        verdict = detect(doubled_tetrahedron, config)

        assert tandem.call_count >= 1
        root, *reached = verdict.per_candidate
        assert root.candidate_id == "c0"
        assert root.status == STATUS_SPHERE
        assert reached
        for record in reached:
            assert record.candidate_id.startswith("c0.s")
            assert record.status in (STATUS_FOUND, STATUS_EXHAUSTED, STATUS_BUDGET)
            assert record.lamalg1_stages >= 1
        assert verdict.outcome in (LAMINAR_CERTIFIED, NO_CANDIDATE_CARRIES, INCONCLUSIVE)

    def test_candidates_are_processed_in_parallel_order(self, doubled_tetrahedron):
        config = override_settings(default_budget=1, doc_rounds=0, max_candidates=3, max_complexes_per_stage=200)
        single = detect(doubled_tetrahedron, config)
        pooled = detect(doubled_tetrahedron, config.model_copy(update={"workers": 2}))
        assert verdict_to_json(single) == verdict_to_json(pooled)


class TestReports:

    @pytest.fixture
    def verdict(self, sink_certificate):
        record = CandidateRecord(
            candidate_id="c0",
            selection="0:0,1;1:2",
            status=STATUS_EXHAUSTED,
            evidence=("radius witness at N=1: R=Infinite",),
            lamalg1_stages=2,
            lamalg2_stages=1,
            exhausted_at=2,
        )
        return Verdict(
            schema_version="1.0",
            outcome=INCONCLUSIVE,
            per_candidate=(record,),
            caveats=(CAVEAT_INCOMPRESSIBILITY,),
            certificate=sink_certificate,
        )

    def test_text_summary(self, verdict):
        text = render_text(verdict)
        assert text.startswith("verdict: Inconclusive\n")
        assert "c0 [0:0,1;1:2] Exhausted (lamalg1 stages=2 lamalg2 stages=1)" in text
        assert "    exhausted at N=2" in text
        assert f"caveat: {CAVEAT_INCOMPRESSIBILITY}" in text
        assert "certificate: selection" in text

    def test_json_report(self, verdict):
        data = orjson.loads(verdict_to_json(verdict))
        assert data["outcome"] == INCONCLUSIVE
        assert data["schema_version"] == "1.0"
        assert data["per_candidate"][0]["exhausted_at"] == 2
        assert data["certificate"]["complex"] == serialize_complex(CONTACT)
