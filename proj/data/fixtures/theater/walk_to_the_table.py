def execute_command(image):
    image_patch = ImagePatch(image)
    table_patches = image_patch.find('table')
    if len(table_patches) == 0:
        return {'function': 'None', 'error': 'No table found.'}
    table = table_patches[0]
    return {'function': 'navigate_to_object', 'inputs': (table.horizontal_center, table.vertical_center), 'box': [table.left, table.lower, table.right, table.upper]}
