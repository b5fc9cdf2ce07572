import pytest

from conftest import write_csv_file
from src.cli import build_parser, main


@pytest.fixture
def run_env(tmp_path):
    train = write_csv_file(tmp_path / "train.csv", [
        ("name[Aromi], eatType[pub], priceRange[cheap], area[riverside]", "Aromi is a cheap pub by the riverside."),
        ("name[Cocum], food[Chinese], customer rating[low], familyFriendly[no], near[Avalon]",
         "Cocum serves Chinese food near Avalon. It has a low rating and is not family friendly."),
    ])
    inputs = write_csv_file(tmp_path / "input.csv", [("name[Aromi], eatType[pub]",)], header=("mr",))
    config = tmp_path / "run.env"
    config.write_text(
        f"train_csv={train}\ninput_csv={inputs}\nout_dir={tmp_path / 'out'}\n"
        "embed_dim=4\nhidden_dim=5\nepochs=1\nbeam_width=2\nmax_decode_len=8\nmax_reverse_len=8\n"
        "logreg_epochs=20\n",
        encoding="utf-8",
    )
    return tmp_path, config


class TestExitCodes:
    def test_augment_succeeds(self, run_env):
        tmp_path, config = run_env
        assert main(["augment", "--config", str(config)]) == 0
        assert (tmp_path / "out" / "augment" / "omission.csv").is_file()

    def test_train_then_decode(self, run_env):
        tmp_path, config = run_env
        assert main(["train", "--config", str(config)]) == 0
        assert main(["decode", "--config", str(config), "--workers", "2"]) == 0
        assert (tmp_path / "out" / "nbest" / "00000.nbest").is_file()
        assert main(["rerank", "--config", str(config)]) == 0

    def test_flags_override_config(self, run_env):
        tmp_path, config = run_env
        assert main(["augment", "--config", str(config), "--out-dir", str(tmp_path / "other")]) == 0
        assert (tmp_path / "other" / "augment" / "addition.csv").is_file()

    def test_missing_checkpoint_is_a_config_error(self, run_env):
        _, config = run_env
        assert main(["decode", "--config", str(config), "--mode", "reverse"]) == 1

    def test_invalid_setting(self, run_env):
        _, config = run_env
        assert main(["decode", "--config", str(config), "--beam-width", "0"]) == 1

    def test_bad_log_level(self, run_env):
        _, config = run_env
        assert main(["augment", "--config", str(config), "--log-level", "LOUD"]) == 1

    def test_data_error(self, tmp_path):
        bad = write_csv_file(tmp_path / "bad.csv", [("name[X], cuisine[Thai]", "X.")])
        assert main(["augment", "--train", str(bad), "--out-dir", str(tmp_path / "out")]) == 2

    def test_invalid_utf8_is_a_data_error(self, tmp_path):
        bad = tmp_path / "latin1.csv"
        bad.write_bytes(b'mr,ref\n"name[X]","caf\xe9"\n')
        assert main(["augment", "--train", str(bad), "--out-dir", str(tmp_path / "out")]) == 2

    def test_missing_lexicon_is_a_config_error(self, run_env):
        tmp_path, config = run_env
        absent = str(tmp_path / "absent.tsv")
        assert main(["train", "--config", str(config), "--direction", "classifier", "--lexicon", absent]) == 1
        assert not (tmp_path / "out" / "checkpoints").exists()
        hypotheses = tmp_path / "hyp.txt"
        hypotheses.write_text("Aromi is a pub.\nCocum serves Chinese food.\n", encoding="utf-8")
        evaluate = ["evaluate", "--config", str(config), "--references", str(tmp_path / "train.csv"),
                    "--hypotheses", str(hypotheses), "--lexicon", absent]
        assert main(evaluate) == 1
        assert main(evaluate[:-2]) == 0

    def test_unparsable_flag(self):
        with pytest.raises(SystemExit) as info:
            main(["decode", "--beam-width", "wide"])
        assert info.value.code == 1

    def test_subcommand_required(self):
        with pytest.raises(SystemExit) as info:
            main([])
        assert info.value.code == 1


def test_train_direction_flag():
    args = build_parser().parse_args(["train", "--direction", "reverse", "--epochs", "3"])
    assert args.direction == "reverse"
    assert args.epochs == 3
    assert build_parser().parse_args(["train"]).direction == "forward"


def test_dev_flag():
    args = build_parser().parse_args(["train", "--dev", "dev.csv"])
    assert str(args.dev_csv) == "dev.csv"
    assert build_parser().parse_args(["train"]).dev_csv is None
