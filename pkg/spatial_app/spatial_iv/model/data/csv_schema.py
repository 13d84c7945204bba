from typing import List, Optional

from pydantic import BaseModel, ConfigDict


class CsvSchema(BaseModel):
    """Maps dataset roles to CSV column names."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    x: str = 'x'
    y: str = 'y'
    exposure: str = 'a'
    outcome: Optional[str] = None
    covariates: List[str] = []
    region: Optional[str] = None
    id: Optional[str] = None
    distance_unit: Optional[str] = None

    def numeric_columns(self) -> List[str]:
        columns = [self.x, self.y, self.exposure]
        if self.outcome is not None:
            columns.append(self.outcome)
        return columns + list(self.covariates)

    def mapped_columns(self) -> List[str]:
        columns = self.numeric_columns()
        for optional in (self.region, self.id):
            if optional is not None:
                columns.append(optional)
        return columns
