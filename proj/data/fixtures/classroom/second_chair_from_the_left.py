def execute_command(image):
    chair_patches = ImagePatch(image).find('chair')
    if len(chair_patches) == 0:
        return {'function': 'None', 'error': 'Not enough chairs.'}
    chair_patches.sort(key=lambda x: x.horizontal_center)
    chair = chair_patches[1]
    return {'function': 'navigate_to_object', 'inputs': (chair.horizontal_center, chair.vertical_center), 'box': [chair.left, chair.lower, chair.right, chair.upper]}
