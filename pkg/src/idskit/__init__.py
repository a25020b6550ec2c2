"""Anomaly-based network intrusion detection toolkit.

Pipeline pieces: CSV ingestion into typed tables, information-gain
attribute ranking with threshold filtering, six classical classifiers
trained from scratch, a tree+forest stacking hybrid, and a weighted
confusion-matrix metrics suite, all tied together by the ``ids`` CLI.
"""

from .dataset import (AttributeSchema, ClassMapping, Dataset, SampleSpec,
                      align_to_schema, apply_class_mapping, load_cicids,
                      load_generic, load_nslkdd, sample_subset, write_csv)
from .ensemble import (MetaFeatures, StackingConfig, StackingModel,
                       generate_meta_features, train_stacking)
from .featsel import (RankedAttribute, SelectionConfig, discretize_numeric,
                      entropy, filter_by_threshold, information_gain,
                      rank_attributes)
from .classifiers import (BASE_ALGOS, DTableConfig, DecisionTableModel,
                          DecisionTreeModel, ForestConfig, KnnModel, Model,
                          NaiveBayesModel, RandomForestModel, RandomTreeModel,
                          TreeConfig, train_base, training_accuracy)
from .metrics import (ConfusionMatrix, MetricsReport, per_class_metrics,
                      render_report, weighted_metrics)
from .persist import ModelFile, load_model, save_model, schema_fingerprint
from .registry import ALGO_ORDER, train_any
from .errors import DataError, IdsError, ModelError, UsageError

__version__ = "0.1.0"
