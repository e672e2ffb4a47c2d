import pytest

from domain.exceptions import FormatError, RecordNotFoundError
from infrastructure.repositories.corpus_repository import CorpusRepository

SIMPLE = "id: {id}\nlhs: phi(q)\nrhs: f(q,q)\ntags: {tags}\n"


class TestPackagedCorpus:
    def test_every_record_parses(self, corpus):
        records = corpus.get_all()

        assert len(records) >= 60
        assert [r.id for r in records] == sorted(r.id for r in records)

    def test_record_kinds(self, corpus):
        assert corpus.get_record("I4").kind == "derivation"
        assert corpus.get_record("I7").kind == "product"
        assert corpus.get_record("I7").product_matrix.rows == ((2, 3), (-1, 1))

    def test_unknown_id(self, corpus):
        with pytest.raises(RecordNotFoundError):
            corpus.get_record("NOPE")

    def test_get_many_keeps_order(self, corpus):
        assert [r.id for r in corpus.get_many(["I7", "I4"])] == ["I7", "I4"]

    def test_with_tag(self, corpus):
        products = corpus.with_tag("product")

        assert products
        assert all(r.product_matrix is not None for r in products)


class TestDirectoryRepository:
    def test_loads_written_records(self, corpus_dir):
        # Arrange
        directory = corpus_dir(SIMPLE.format(id="B", tags="x"), SIMPLE.format(id="A", tags="x, y"))

        # Act
        repository = CorpusRepository(directory)

        # Assert
        assert repository.ids() == ["A", "B"]
        assert [r.id for r in repository.with_tag("y")] == ["A"]
        assert repository.get("C") is None

    def test_duplicate_ids_name_both_files(self, corpus_dir):
        directory = corpus_dir(SIMPLE.format(id="A", tags="x"), SIMPLE.format(id="A", tags="y"))

        with pytest.raises(FormatError, match="r00.txt"):
            CorpusRepository(directory).get_all()

    def test_malformed_file(self, corpus_dir):
        directory = corpus_dir("id: A\nlhs: phi(q\nrhs: 1\n")

        with pytest.raises(FormatError, match="r00.txt"):
            CorpusRepository(directory).ids()

    def test_missing_directory(self, tmp_path):
        with pytest.raises(FormatError):
            CorpusRepository(tmp_path / "absent").get_all()

    def test_other_suffixes_are_ignored(self, corpus_dir):
        directory = corpus_dir(SIMPLE.format(id="A", tags="x"))
        (directory / "README.md").write_text("not a record", encoding="utf-8")

        assert CorpusRepository(directory).ids() == ["A"]
