import numpy as np
import pytest

from helpers import nominal_dataset

from idskit.dataset import (ClassMapping, NSLKDD_FAMILIES, SampleSpec,
                            align_to_schema, apply_class_mapping, dataset_info_tsv,
                            load_cicids, load_generic, load_nslkdd, sample_subset,
                            write_csv)
from idskit.errors import DataError, ModelError
from idskit.fixtures import fixa_dataset, synthetic_dataset, write_fixa_csv


def nsl_line(label="normal", difficulty="21", n_fields=43):
    fields = ["0", "tcp", "http", "SF"] + ["0"] * 37
    fields.append(label)
    if n_fields == 43:
        fields.append(difficulty)
    return ",".join(fields)


def test_cicids_drops_infinite_rows(tmp_path):
    f = tmp_path / "c.csv"
    f.write_text("A,B, Label\n1,2,BENIGN\n3,inf,DDoS\n")
    d = load_cicids(f)
    assert d.n_rows == 1
    assert d.n_attrs == 2
    assert all(a.kind == "numeric" for a in d.schema)
    assert d.dropped_rows == 1
    assert d.class_values == ("BENIGN",)


def test_cicids_nan_rows_dropped_and_counted(tmp_path):
    f = tmp_path / "c.csv"
    f.write_text("A,B,Label\n1,NaN,x\n2,3,x\n,4,x\n")
    d = load_cicids(f)
    assert d.n_rows == 1
    assert d.dropped_rows == 2


def test_cicids_empty_file_unparseable_header(tmp_path):
    f = tmp_path / "c.csv"
    f.write_text("")
    with pytest.raises(DataError, match="unparseable header"):
        load_cicids(f)


def test_cicids_wrong_field_count_reports_line(tmp_path):
    f = tmp_path / "c.csv"
    f.write_text("A,B,Label\n1,2,x\n1,2,3,x\n")
    with pytest.raises(DataError, match="line 3"):
        load_cicids(f)


def test_cicids_missing_file(tmp_path):
    with pytest.raises(DataError, match="nothere"):
        load_cicids(tmp_path / "nothere.csv")


def test_cicids_directory_of_csvs(tmp_path):
    (tmp_path / "a.csv").write_text("A,Label\n1,BENIGN\n")
    (tmp_path / "b.csv").write_text("A,Label\n2,DDoS\n")
    d = load_cicids(tmp_path)
    assert d.n_rows == 2
    assert d.class_values == ("BENIGN", "DDoS")


def test_cicids_duplicate_headers_are_mangled(tmp_path):
    f = tmp_path / "c.csv"
    f.write_text("A,A,Label\n1,2,x\n")
    d = load_cicids(f)
    assert d.attribute_names() == ["A", "A.1"]


def test_nslkdd_difficulty_dropped(tmp_path):
    f = tmp_path / "k.txt"
    f.write_text(nsl_line("normal", "21") + "\n")
    d = load_nslkdd(f)
    assert d.n_rows == 1
    assert d.n_attrs == 41
    assert d.class_values == ("normal",)
    assert d.source_tag == "nslkdd"


def test_nslkdd_42_field_variant(tmp_path):
    f = tmp_path / "k.txt"
    f.write_text(nsl_line("neptune", n_fields=42) + "\n")
    d = load_nslkdd(f)
    assert d.class_values == ("neptune",)
    assert [a.kind for a in d.schema[1:4]] == ["nominal"] * 3


def test_nslkdd_inconsistent_field_counts(tmp_path):
    f = tmp_path / "k.txt"
    f.write_text(nsl_line() + "\n" + nsl_line(n_fields=42) + "\n")
    with pytest.raises(DataError, match="line 2"):
        load_nslkdd(f)


def test_nslkdd_non_numeric_token(tmp_path):
    fields = nsl_line().split(",")
    fields[4] = "oops"  # src_bytes
    f = tmp_path / "k.txt"
    f.write_text(",".join(fields) + "\n")
    with pytest.raises(DataError, match="src_bytes"):
        load_nslkdd(f)


def test_binary_mapping_counts(tmp_path):
    f = tmp_path / "k.txt"
    f.write_text("\n".join(nsl_line(l) for l in ("normal", "neptune", "smurf")) + "\n")
    d = apply_class_mapping(load_nslkdd(f), ClassMapping("binary"))
    assert d.class_values == ("normal", "anomaly")
    assert d.class_counts().tolist() == [1, 2]
    assert set(np.unique(d.y)) <= {0, 1}


def test_multiclass_mapping_families(tmp_path):
    labels = ("normal", "neptune", "satan", "guess_passwd", "rootkit")
    f = tmp_path / "k.txt"
    f.write_text("\n".join(nsl_line(l) for l in labels) + "\n")
    d = apply_class_mapping(load_nslkdd(f), ClassMapping("multiclass"))
    assert d.class_values == NSLKDD_FAMILIES
    got = [d.class_values[c] for c in d.y]
    assert got == ["normal", "DoS", "Probe", "R2L", "U2R"]


def test_multiclass_unknown_attack_errors(tmp_path):
    f = tmp_path / "k.txt"
    f.write_text(nsl_line("zeroday_worm") + "\n")
    with pytest.raises(DataError, match="zeroday_worm"):
        apply_class_mapping(load_nslkdd(f), ClassMapping("multiclass"))


def test_multiclass_passthrough_for_cicids(tmp_path):
    f = tmp_path / "c.csv"
    f.write_text("A,Label\n1,DDoS\n2,PortScan\n")
    d = load_cicids(f)
    mapped = apply_class_mapping(d, ClassMapping("multiclass"))
    assert mapped.class_values == d.class_values


def test_all_normal_binary_is_single_class():
    d = nominal_dataset({"A": ["u", "v"]}, ["normal", "normal"])
    mapped = apply_class_mapping(d, ClassMapping("binary"))
    assert mapped.class_values == ("normal", "anomaly")
    assert mapped.classes_present() == 1


def test_binary_mapping_on_cicids_keeps_benign_name(tmp_path):
    f = tmp_path / "c.csv"
    f.write_text("A,Label\n1,BENIGN\n2,DDoS\n")
    mapped = apply_class_mapping(load_cicids(f), ClassMapping("binary"))
    assert mapped.class_values == ("BENIGN", "anomaly")


def test_sample_subset_stratified():
    labels = ["a"] * 50 + ["b"] * 50
    d = nominal_dataset({"A": ["u"] * 100}, labels)
    train, test = sample_subset(d, SampleSpec(10, 10, seed=7, stratified=True))
    assert train.class_counts().tolist() == [5, 5]
    assert test.class_counts().tolist() == [5, 5]


def test_sample_subset_deterministic_and_disjoint():
    d = synthetic_dataset(100, 2, 1, seed=3)
    s = SampleSpec(30, 20, seed=7, stratified=True)
    t1, e1 = sample_subset(d, s)
    t2, e2 = sample_subset(d, s)
    assert t1 == t2 and e1 == e2
    joined = np.vstack([t1.X, e1.X])
    assert len(np.unique(joined, axis=0)) == len(joined)


def test_sample_subset_infeasible():
    d = synthetic_dataset(50, 2, 1, seed=3)
    with pytest.raises(DataError):
        sample_subset(d, SampleSpec(40, 20, seed=1))


def test_sample_subset_stratified_class_too_small():
    labels = ["a"] * 98 + ["b"] * 2
    d = nominal_dataset({"A": ["u"] * 100}, labels)
    with pytest.raises(DataError, match="'b'"):
        sample_subset(d, SampleSpec(50, 49, seed=1, stratified=True))


def test_csv_round_trip_fixa(tmp_path):
    d = fixa_dataset()
    f = tmp_path / "fixa.csv"
    write_csv(d, f)
    assert load_generic(f) == d


def test_csv_round_trip_synthetic(tmp_path):
    d = synthetic_dataset(200, 3, 2, seed=11)
    f = tmp_path / "s.csv"
    write_csv(d, f)
    again = load_generic(f)
    assert again == d
    assert again.dropped_rows == 0  # cleaning is idempotent


def test_generic_loader_missing_label(tmp_path):
    f = tmp_path / "g.csv"
    f.write_text("A,B\n1,2\n")
    with pytest.raises(DataError, match="label"):
        load_generic(f)


def test_align_to_schema_remaps_unknown_categories():
    train = nominal_dataset({"A": ["u", "v"]}, ["c0", "c1"])
    test = nominal_dataset({"A": ["v", "w", "u"]}, ["c1", "c0", "c0"])
    aligned = align_to_schema(test, train.schema, train.class_values)
    assert aligned.X[:, 0].tolist() == [1.0, 2.0, 0.0]  # w -> reserved unknown


def test_align_to_schema_rejects_missing_attribute():
    train = nominal_dataset({"A": ["u", "v"]}, ["c0", "c1"])
    test = nominal_dataset({"B": ["u", "v"]}, ["c0", "c1"])
    with pytest.raises(ModelError, match="'A'"):
        align_to_schema(test, train.schema, train.class_values)


def test_dataset_info_tsv(tmp_path):
    d = fixa_dataset()
    text = dataset_info_tsv(d)
    assert "rows\t8" in text
    assert "attributes\t3" in text
    assert "class\tattack\t4" in text


def test_fixa_csv_matches_spec_rows(tmp_path):
    f = tmp_path / "fixa.csv"
    write_fixa_csv(f)
    lines = f.read_text().strip().splitlines()
    assert lines[0] == "A,B,C,label"
    assert lines[1] == "a,x,p,attack"
    assert lines[8] == "b,y,p,normal"
    assert len(lines) == 9
