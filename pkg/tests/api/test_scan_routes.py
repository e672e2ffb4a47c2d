import orjson

from main import app

ARGS = ["scan", "--max-det", "1", "-n", "40", "--max-index", "2", "--box", "1"]


class TestScanRoute:
    def test_json(self, runner):
        # Act
        result = runner.invoke(app, ARGS + ["--format", "json"])

        # Assert
        payload = orjson.loads(result.stdout)
        assert result.exit_code == 0
        assert [r["form"] for r in payload] == [[1, 0, 1]]
        assert payload[0]["verified"] is True

    def test_records_to_file(self, runner, tmp_path):
        out = tmp_path / "scan.txt"

        result = runner.invoke(app, ARGS + ["--format", "records", "--out", str(out)])

        assert result.exit_code == 0
        assert result.stdout == ""
        assert "id: SCAN-1-1.0.1-1" in out.read_text(encoding="utf-8")

    def test_table(self, runner):
        result = runner.invoke(app, ARGS)

        assert result.exit_code == 0
        assert "(1,0,1)" in result.stdout

    def test_table_to_file(self, runner, tmp_path):
        # Arrange
        out = tmp_path / "scan.txt"

        # Act
        result = runner.invoke(app, ARGS + ["--out", str(out)])

        # Assert
        assert result.exit_code == 0
        assert result.stdout == ""
        written = out.read_text(encoding="utf-8")
        assert "(1,0,1)" in written
        assert "diagonalizers" in written
