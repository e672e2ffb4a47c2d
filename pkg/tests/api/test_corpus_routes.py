import orjson

from main import app

MUTATED = """\
id: I7
lhs: 2*f(-q^4,-q^6)*f(-q^6,-q^9) - 2*q*f(-q^2,-q^8)*f(-q^3,-q^12)
rhs: f(1,q)*f(-q^3,-q^3)
"""


class TestVerifyRoute:
    def test_true_identities_exit_zero(self, runner):
        # Act
        result = runner.invoke(app, ["verify", "I4", "I7", "-n", "100"])

        # Assert
        assert result.exit_code == 0
        assert "2 records, 0 failed" in result.stdout

    def test_json_report(self, runner):
        result = runner.invoke(app, ["verify", "I4", "-n", "100", "--derivations", "--derivation-order", "100", "--json"])

        payload = orjson.loads(result.stdout)
        assert result.exit_code == 0
        assert payload["ok"] is True
        assert [r["id"] for r in payload["reports"]] == ["I4"]
        assert payload["derivations"][0]["ok"] is True

    def test_false_identity_exits_one(self, runner, corpus_dir):
        directory = corpus_dir(MUTATED)

        result = runner.invoke(app, ["verify", "--all", "-n", "50", "--corpus-dir", str(directory), "--json"])

        assert result.exit_code == 1
        assert orjson.loads(result.stdout)["reports"][0]["first_mismatch"] == 1

    def test_needs_ids(self, runner):
        result = runner.invoke(app, ["verify"])

        assert result.exit_code == 2

    def test_unknown_id(self, runner):
        result = runner.invoke(app, ["verify", "NOPE", "-n", "50"])

        assert result.exit_code == 2
        assert "NOPE" in result.stderr
