import orjson

from main import app

I4_FORM = "quad: 3,2,4 | lin: 1,4 | delta: 1,0"


class TestExpandRoute:
    def test_prints_collected_expression(self, runner):
        # Act
        result = runner.invoke(app, ["expand", "--form", I4_FORM, "-B", "1,-1;0,3", "--shifts", "e2, -1..1"])

        # Assert
        assert result.exit_code == 0
        assert result.stdout.strip().splitlines()[-1] == "2*f(-q^2,-q^4)*f(-q^22,-q^44)"

    def test_json(self, runner):
        result = runner.invoke(app, ["expand", "--form", I4_FORM, "-B", "1,-1;0,3", "--json"])

        payload = orjson.loads(result.stdout)
        assert payload["image"] == [[6, 0], [0, 66]]
        assert payload["vanishing"] == 1

    def test_split_units(self, runner):
        result = runner.invoke(app, ["expand", "--form", "quad: 1,1,1", "-B", "1,1;-1,1", "--split-units"])

        assert result.stdout.strip().splitlines()[-1] == "f(q,q)*f(q^3,q^3) + 4*q*f(q^2,q^6)*f(q^6,q^18)"

    def test_non_diagonalizing_matrix(self, runner):
        result = runner.invoke(app, ["expand", "--form", I4_FORM, "-B", "1,0;0,1"])

        assert result.exit_code == 2


class TestFindMatrixRoute:
    def test_finds_matrix(self, runner):
        result = runner.invoke(app, ["find-matrix", "--gram", "3,1;1,4", "--target", "3,33"])

        assert result.exit_code == 0
        assert result.stdout.splitlines() == ["[[1,-1],[0,3]]"]

    def test_none_found_exits_one(self, runner):
        result = runner.invoke(app, ["find-matrix", "--gram", "3,1;1,4", "--target", "3,4"])

        assert result.exit_code == 1

    def test_indefinite_gram(self, runner):
        result = runner.invoke(app, ["find-matrix", "--gram", "1,2;2,1", "--target", "1,1"])

        assert result.exit_code == 2


class TestReduceFormsRoute:
    def test_lists_forms(self, runner):
        result = runner.invoke(app, ["reduce-forms", "--det", "11"])

        assert result.stdout.splitlines() == ["(1,0,11)", "(3,-2,4)", "(3,2,4)"]

    def test_reduces_one_form(self, runner):
        result = runner.invoke(app, ["reduce-forms", "--form", "3,8,9"])

        assert result.stdout.strip() == "(3,2,4)  U = [[1,-1],[0,1]]"

    def test_needs_an_argument(self, runner):
        result = runner.invoke(app, ["reduce-forms"])

        assert result.exit_code == 2


class TestCheckEcsRoute:
    def test_simple_matrix(self, runner):
        result = runner.invoke(app, ["check-ecs", "-B", "1,-1;0,3"])

        lines = result.stdout.splitlines()
        assert result.exit_code == 0
        assert lines[0] == "det = 3"
        assert "simple covering: adjugate column 2" in lines
        assert "representatives: i*e2 for i = -1..1" in lines
        assert lines[-1] == "exact cover"

    def test_overlapping_representatives(self, runner):
        result = runner.invoke(app, ["check-ecs", "-B", "1,-1;0,3", "--reps", "0,0;0,3;0,1"])

        assert result.exit_code == 1
        assert result.stdout.splitlines()[-1] == "not an exact cover"

    def test_singular_matrix(self, runner):
        result = runner.invoke(app, ["check-ecs", "-B", "1,1;1,1"])

        assert result.exit_code == 2
