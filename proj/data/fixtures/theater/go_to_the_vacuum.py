def execute_command(image):
    image_patch = ImagePatch(image)
    vacuum_patches = image_patch.find('vacuum')
    if len(vacuum_patches) == 0:
        return {'function': 'None', 'error': 'No vacuum found.'}
    vacuum = vacuum_patches[0]
    return {'function': 'navigate_to_object', 'inputs': (vacuum.horizontal_center, vacuum.vertical_center), 'box': [vacuum.left, vacuum.lower, vacuum.right, vacuum.upper]}
