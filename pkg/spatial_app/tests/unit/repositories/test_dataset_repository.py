import numpy as np
import pytest

from spatial_iv.exceptions import DataError, EmptyAfterFiltering, \
    InvalidEdgeList, MissingColumn, NonNumericValue
from spatial_iv.model.data.csv_schema import CsvSchema
from spatial_iv.repositories.dataset_repository import \
    DatasetRepositoryImpl, dataset_schema
from tests.fakes import confounded_dataset, grid_coords


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return path


def test_load_csv_with_mapped_columns(tmp_path):
    # Given
    path = _write(tmp_path, 'counties.csv', (
        "# distance_unit: km\n"
        "fips,lon,lat,pm25,deaths,income,state\n"
        "01001,0.1,0.2,8.5,10,3.2,AL\n"
        "01003,0.3,0.1,9.0,12,3.4,AL\n"
        "13001,0.7,0.9,7.5,8,2.9,GA\n"
    ))
    schema = CsvSchema(x='lon', y='lat', exposure='pm25', outcome='deaths',
                       covariates=['income'], region='state', id='fips')

    # When
    result = DatasetRepositoryImpl().load_csv(path, schema)

    # Then
    dataset = result.dataset
    assert result.dropped_rows == 0
    assert dataset.n == 3
    assert dataset.ids == ('01001', '01003', '13001')
    assert dataset.covariate_names == ('income',)
    assert dataset.region_levels() == ('AL', 'GA')
    assert dataset.distance_unit == 'km'
    assert dataset.exposure.tolist() == [8.5, 9.0, 7.5]
    assert dataset.metadata['source'] == str(path)


def test_load_csv_drops_incomplete_rows(tmp_path):
    # Given
    path = _write(tmp_path, 'd.csv', (
        "x,y,a,outcome\n"
        "0.1,0.2,1.0,2.0\n"
        "0.2,0.3,,2.5\n"
        "0.3,0.1,1.5,NA\n"
        "0.4,0.4,2.0,3.0\n"
        "0.5,0.9,2.5,3.5\n"
    ))

    # When
    result = DatasetRepositoryImpl().load_csv(
        path, CsvSchema(outcome='outcome')
    )

    # Then
    assert result.dropped_rows == 2
    assert result.dataset.ids == ('1', '4', '5')
    assert result.dataset.outcome.tolist() == [2.0, 3.0, 3.5]


def test_load_csv_missing_column(tmp_path):
    path = _write(tmp_path, 'd.csv', "x,y\n0,0\n1,1\n2,2\n")

    with pytest.raises(MissingColumn) as e:
        DatasetRepositoryImpl().load_csv(path, CsvSchema())

    assert e.value.column == 'a'


def test_load_csv_non_numeric_value(tmp_path):
    path = _write(tmp_path, 'd.csv',
                  "x,y,a\n0,0,1\n1,1,2\n2,two,3\n3,3,4\n")

    with pytest.raises(NonNumericValue) as e:
        DatasetRepositoryImpl().load_csv(path, CsvSchema())

    assert e.value.column == 'y'
    assert e.value.row == 3


def test_load_csv_with_nothing_left(tmp_path):
    path = _write(tmp_path, 'd.csv', "x,y,a\n0,0,\n1,,2\n")

    with pytest.raises(EmptyAfterFiltering):
        DatasetRepositoryImpl().load_csv(path, CsvSchema())


def test_load_csv_missing_file_is_a_data_error(tmp_path):
    with pytest.raises(DataError):
        DatasetRepositoryImpl().load_csv(tmp_path / 'nope.csv', CsvSchema())


def test_saved_dataset_loads_back(tmp_path):
    # Given
    repository = DatasetRepositoryImpl()
    dataset = confounded_dataset(n=20, covariates=2)
    path = tmp_path / 'out' / 'replicate.csv'

    # When
    repository.save_csv(dataset, path, metadata={'seed': '3'})
    loaded = repository.load_csv(path, dataset_schema(dataset)).dataset

    # Then
    text = path.read_text(encoding='utf-8')
    assert text.startswith('# distance_unit: ')
    assert '# seed: 3\n' in text
    assert loaded.ids == dataset.ids
    assert loaded.covariate_names == ('x1', 'x2')
    assert np.allclose(loaded.coords, dataset.coords, rtol=0, atol=1e-12)
    assert np.allclose(loaded.outcome, dataset.outcome, rtol=0, atol=1e-12)
    assert loaded.metadata['seed'] == '3'
    assert list(tmp_path.joinpath('out').iterdir()) == [path]


def test_load_edge_list_maps_ids(tmp_path):
    # Given
    dataset = confounded_dataset(n=6)
    path = _write(tmp_path, 'edges.csv', "from,to\n1,2\n2,3\n3,1\n5,6\n")

    # When
    graph = DatasetRepositoryImpl().load_edge_list(path, dataset)

    # Then
    assert graph.n == 6
    assert graph.edges == frozenset({(0, 1), (1, 2), (0, 2), (4, 5)})
    assert graph.n_components == 3
    assert not graph.is_connected


def test_load_edge_list_rejects_unknown_ids(tmp_path):
    dataset = confounded_dataset(n=6)
    path = _write(tmp_path, 'edges.csv', "1,2\n2,9\n")

    with pytest.raises(InvalidEdgeList):
        DatasetRepositoryImpl().load_edge_list(path, dataset)


def test_load_layout(tmp_path):
    # Given
    coords = grid_coords(3, 4)
    lines = ['x,y,state'] + [
        f"{x},{y},{'A' if x < 0.5 else 'B'}" for x, y in coords
    ]
    path = _write(tmp_path, 'layout.csv', '\n'.join(lines) + '\n')

    # When
    layout = DatasetRepositoryImpl().load_layout(path, region='state')

    # Then
    assert layout.n == 12
    assert np.allclose(layout.coords, coords)
    assert set(layout.region) == {'A', 'B'}


def test_load_layout_missing_region_column(tmp_path):
    path = _write(tmp_path, 'layout.csv', "x,y\n0,0\n1,1\n")

    with pytest.raises(MissingColumn):
        DatasetRepositoryImpl().load_layout(path, region='state')
