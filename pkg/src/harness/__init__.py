from .model_file import MODEL_FORMAT, dump_model, load_model, model_to_dict, parse_model
from .query import METHODS, QuerySpec, get_method_info, parse_queries, query_from_dict, run_query
from .report import RunReport
from .table import TableRow, reproduce_table, table_to_csv
